#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qtfds/grid.hpp"
#include "qtfds/registry.hpp"

namespace qtfds {

using cd = std::complex<double>;
using Mat2Xcd = Eigen::Matrix<cd, 2, Eigen::Dynamic>;
using RowXcd = Eigen::Matrix<cd, 1, Eigen::Dynamic>;

/// Rotation R(theta) = [[cos, -sin], [sin, cos]] acting on an
/// (amplitude, phase) quadrature pair.
Eigen::Matrix2d rotation(double theta);

/// Per-frequency complex 2 x 2N map from all registered input quadratures to
/// one output quadrature pair. Row 0 is the amplitude row, row 1 the phase
/// row, matching subscripts 1 and 2.
class TransferMap {
 public:
  TransferMap(FrequencyGrid grid, ModeRegistry registry);

  const FrequencyGrid& grid() const { return grid_; }
  const ModeRegistry& registry() const { return registry_; }
  std::size_t cols() const { return registry_.dim(); }

  Mat2Xcd& at(std::size_t i) { return maps_[i]; }
  const Mat2Xcd& at(std::size_t i) const { return maps_[i]; }

  /// Writes a 2x2 block into the columns of the named port at frequency i.
  void set_block(std::size_t i, const std::string& port,
                 const Eigen::Matrix2cd& block);

 private:
  FrequencyGrid grid_;
  ModeRegistry registry_;
  std::vector<Mat2Xcd> maps_;
};

/// 2x2 Hermitian output spectral density per frequency; scalar spectra are the
/// real diagonal entries.
class OutputSpectrum {
 public:
  OutputSpectrum(FrequencyGrid grid, std::vector<Eigen::Matrix2cd> s);
  const FrequencyGrid& grid() const { return grid_; }
  const Eigen::Matrix2cd& at(std::size_t i) const { return s_[i]; }
  /// Diagonal entry (0 = amplitude, 1 = phase) as a real spectrum.
  std::vector<double> diagonal(int which) const;

 private:
  FrequencyGrid grid_;
  std::vector<Eigen::Matrix2cd> s_;
};

/// One measured channel: a per-frequency 1 x 2N row over the registry.
class ChannelRow {
 public:
  ChannelRow(FrequencyGrid grid, ModeRegistry registry);
  const FrequencyGrid& grid() const { return grid_; }
  const ModeRegistry& registry() const { return registry_; }
  RowXcd& at(std::size_t i) { return rows_[i]; }
  const RowXcd& at(std::size_t i) const { return rows_[i]; }

 private:
  FrequencyGrid grid_;
  ModeRegistry registry_;
  std::vector<RowXcd> rows_;
};

/// Applies a constant 2x2 transfer to the output pair of `inner`.
TransferMap compose(const Eigen::Matrix2cd& outer, const TransferMap& inner);

/// Applies a per-frequency 2x2 transfer to the output pair of `inner`.
TransferMap compose(const std::vector<Eigen::Matrix2cd>& outer,
                    const TransferMap& inner);

/// S_out = T S_in T^dagger per frequency. Throws on dimension mismatch.
OutputSpectrum propagate(const TransferMap& map, const Eigen::MatrixXd& s_in);

/// Convenience: propagate against the map's own registry covariance.
OutputSpectrum propagate(const TransferMap& map);

/// Scalar spectrum of one channel row: Re(row S row^dagger) per frequency.
std::vector<double> scalar_spectrum(const ChannelRow& row,
                                    const Eigen::MatrixXd& s_in);

/// Cross-spectrum S_xy(i) = x S y^dagger at every frequency.
std::vector<cd> cross_spectrum(const ChannelRow& x, const ChannelRow& y,
                               const Eigen::MatrixXd& s_in);

} // namespace qtfds
