#include "qtfds/wiener.hpp"

#include <stdexcept>

namespace qtfds {

CrossSpectra cross_spectra(const ChannelRow& b,
                           const std::vector<const ChannelRow*>& alphas,
                           const Eigen::MatrixXd& s_in) {
  const std::size_t nf = b.grid().size();
  const Eigen::Index n = static_cast<Eigen::Index>(alphas.size());
  CrossSpectra cs;
  cs.s_aa.assign(nf, Eigen::MatrixXcd::Zero(n, n));
  cs.s_ba.assign(nf, Eigen::VectorXcd::Zero(n));
  cs.s_bb.assign(nf, 0.0);
  for (std::size_t i = 0; i < nf; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cs.s_ba[i](j) = (b.at(i) * s_in * alphas[j]->at(i).adjoint())(0, 0);
      for (Eigen::Index k = 0; k <= j; ++k) {
        const cd v =
            (alphas[j]->at(i) * s_in * alphas[k]->at(i).adjoint())(0, 0);
        cs.s_aa[i](j, k) = v;
        cs.s_aa[i](k, j) = std::conj(v);
      }
    }
    cs.s_bb[i] = (b.at(i) * s_in * b.at(i).adjoint())(0, 0).real();
  }
  return cs;
}

FilterGains wiener_gains(const CrossSpectra& cs) {
  FilterGains out;
  out.g.resize(cs.size());
  out.singular.assign(cs.size(), false);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    // The variance of B - sum g_k alpha_k is quadratic in g with kernel
    // conj(S_aa) under the S_xy = <x y^dag> convention, so the normal
    // equations read conj(S_aa) g = S_Ba. This is what the two-channel
    // closed forms solve; for the physical Bell pair S_aa is real anyway.
    const Eigen::MatrixXcd a = cs.s_aa[i].conjugate();
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) {
      const double dmin = ldlt.vectorD().real().minCoeff();
      const double dmax = ldlt.vectorD().real().maxCoeff();
      ok = dmin > 1e-12 * std::max(dmax, 1.0);
    }
    if (ok) {
      out.g[i] = ldlt.solve(cs.s_ba[i]);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
      cod.setThreshold(1e-12);
      cod.compute(a);
      out.g[i] = cod.solve(cs.s_ba[i]);
      out.singular[i] = true;
    }
  }
  return out;
}

std::vector<double> residual_spectrum(const CrossSpectra& cs,
                                      const FilterGains& g) {
  if (g.g.size() != cs.size())
    throw std::invalid_argument("residual_spectrum: size mismatch");
  std::vector<double> out(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& gi = g.g[i];
    const cd quad = (gi.adjoint() * cs.s_aa[i].conjugate() * gi)(0, 0);
    const cd lin = (gi.adjoint() * cs.s_ba[i])(0, 0);
    out[i] = cs.s_bb[i] + quad.real() - 2.0 * lin.real();
  }
  return out;
}

ChannelRow teleported_output(const ChannelRow& b,
                             const std::vector<const ChannelRow*>& alphas,
                             const FilterGains& g) {
  ChannelRow out = b;
  for (std::size_t i = 0; i < b.grid().size(); ++i) {
    for (std::size_t k = 0; k < alphas.size(); ++k)
      out.at(i) -= g.g[i](static_cast<Eigen::Index>(k)) * alphas[k]->at(i);
  }
  return out;
}

} // namespace qtfds
