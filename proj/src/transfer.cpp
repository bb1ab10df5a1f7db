#include "qtfds/transfer.hpp"

#include <cmath>
#include <stdexcept>

namespace qtfds {

Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

TransferMap::TransferMap(FrequencyGrid grid, ModeRegistry registry)
    : grid_(std::move(grid)), registry_(std::move(registry)) {
  maps_.assign(grid_.size(), Mat2Xcd::Zero(2, registry_.dim()));
}

void TransferMap::set_block(std::size_t i, const std::string& port,
                            const Eigen::Matrix2cd& block) {
  maps_[i].block<2, 2>(0, static_cast<Eigen::Index>(registry_.col(port))) =
      block;
}

OutputSpectrum::OutputSpectrum(FrequencyGrid grid,
                               std::vector<Eigen::Matrix2cd> s)
    : grid_(std::move(grid)), s_(std::move(s)) {
  if (s_.size() != grid_.size())
    throw std::invalid_argument("OutputSpectrum: size mismatch");
}

std::vector<double> OutputSpectrum::diagonal(int which) const {
  std::vector<double> out(s_.size());
  for (std::size_t i = 0; i < s_.size(); ++i)
    out[i] = s_[i](which, which).real();
  return out;
}

ChannelRow::ChannelRow(FrequencyGrid grid, ModeRegistry registry)
    : grid_(std::move(grid)), registry_(std::move(registry)) {
  rows_.assign(grid_.size(), RowXcd::Zero(registry_.dim()));
}

TransferMap compose(const Eigen::Matrix2cd& outer, const TransferMap& inner) {
  TransferMap out = inner;
  for (std::size_t i = 0; i < out.grid().size(); ++i)
    out.at(i) = outer * inner.at(i);
  return out;
}

TransferMap compose(const std::vector<Eigen::Matrix2cd>& outer,
                    const TransferMap& inner) {
  if (outer.size() != inner.grid().size())
    throw std::invalid_argument("compose: grid size mismatch");
  TransferMap out = inner;
  for (std::size_t i = 0; i < out.grid().size(); ++i)
    out.at(i) = outer[i] * inner.at(i);
  return out;
}

OutputSpectrum propagate(const TransferMap& map, const Eigen::MatrixXd& s_in) {
  if (s_in.rows() != s_in.cols() ||
      s_in.rows() != static_cast<Eigen::Index>(map.cols()))
    throw std::invalid_argument("propagate: dimension mismatch");
  std::vector<Eigen::Matrix2cd> out(map.grid().size());
  for (std::size_t i = 0; i < map.grid().size(); ++i) {
    const Mat2Xcd& t = map.at(i);
    Eigen::Matrix2cd s = t * s_in * t.adjoint();
    // exact Hermitian symmetrization against roundoff
    out[i] = 0.5 * (s + s.adjoint());
  }
  return OutputSpectrum(map.grid(), std::move(out));
}

OutputSpectrum propagate(const TransferMap& map) {
  return propagate(map, map.registry().covariance());
}

std::vector<double> scalar_spectrum(const ChannelRow& row,
                                    const Eigen::MatrixXd& s_in) {
  if (s_in.rows() != static_cast<Eigen::Index>(row.registry().dim()))
    throw std::invalid_argument("scalar_spectrum: dimension mismatch");
  std::vector<double> out(row.grid().size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (row.at(i) * s_in * row.at(i).adjoint())(0, 0).real();
  return out;
}

std::vector<cd> cross_spectrum(const ChannelRow& x, const ChannelRow& y,
                               const Eigen::MatrixXd& s_in) {
  if (x.grid().size() != y.grid().size())
    throw std::invalid_argument("cross_spectrum: grid mismatch");
  std::vector<cd> out(x.grid().size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (x.at(i) * s_in * y.at(i).adjoint())(0, 0);
  return out;
}

} // namespace qtfds
