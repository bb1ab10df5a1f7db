#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qtfds/transfer.hpp"

namespace qtfds {

/// Per-frequency second moments of the target channel B against the N witness
/// channels alpha.
struct CrossSpectra {
  std::vector<Eigen::MatrixXcd> s_aa;  // N x N Hermitian PSD per frequency
  std::vector<Eigen::VectorXcd> s_ba;  // S_{B alpha_k} per frequency
  std::vector<double> s_bb;            // scalar, >= 0

  std::size_t size() const { return s_bb.size(); }
  std::size_t channels() const { return s_aa.empty() ? 0 : s_aa[0].rows(); }
};

/// Builds CrossSpectra from a target row and witness rows over a shared
/// registry covariance.
CrossSpectra cross_spectra(const ChannelRow& b,
                           const std::vector<const ChannelRow*>& alphas,
                           const Eigen::MatrixXd& s_in);

/// Per-frequency complex filter gains.
struct FilterGains {
  std::vector<Eigen::VectorXcd> g;
  /// true where S_aa was (numerically) singular and the minimum-norm solution
  /// was taken instead
  std::vector<bool> singular;
};

/// Solves the normal equations conj(S_aa) g = S_Ba per frequency (the
/// variance of B - sum g_k alpha_k is quadratic with kernel conj(S_aa) under
/// the S_xy = <x y^dag> convention); minimum-norm pseudo-inverse with
/// relative rank cutoff 1e-12 where S_aa is singular.
FilterGains wiener_gains(const CrossSpectra& cs);

/// S_BB + g^dag conj(S_aa) g - 2 Re(g^dag S_Ba) per frequency; at the optimal
/// gains this equals S_BB - S_Ba^dag conj(S_aa)^{-1} S_Ba.
std::vector<double> residual_spectrum(const CrossSpectra& cs,
                                      const FilterGains& g);

/// B - sum_k g_k alpha_k as one channel row; its propagated spectrum equals
/// residual_spectrum at the same gains.
ChannelRow teleported_output(const ChannelRow& b,
                             const std::vector<const ChannelRow*>& alphas,
                             const FilterGains& g);

} // namespace qtfds
