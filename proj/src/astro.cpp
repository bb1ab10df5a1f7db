#include "qtfds/astro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtfds/constants.hpp"

namespace qtfds {

using std::numbers::pi;
using namespace constants;

void AsdTable::validate() const {
  if (freq_hz.size() != asd.size() || freq_hz.size() < 2)
    throw std::invalid_argument("AsdTable: need >= 2 matching samples");
  for (std::size_t i = 0; i < freq_hz.size(); ++i) {
    if (!(asd[i] > 0.0)) throw std::invalid_argument("AsdTable: ASD must be > 0");
    if (i > 0 && !(freq_hz[i] > freq_hz[i - 1]))
      throw std::invalid_argument("AsdTable: frequencies must increase");
  }
}

double AsdTable::at(double f_hz) const {
  if (f_hz <= freq_hz.front()) return asd.front();
  if (f_hz >= freq_hz.back()) return asd.back();
  const auto it = std::upper_bound(freq_hz.begin(), freq_hz.end(), f_hz);
  const std::size_t j = static_cast<std::size_t>(it - freq_hz.begin());
  const double lf0 = std::log(freq_hz[j - 1]), lf1 = std::log(freq_hz[j]);
  const double la0 = std::log(asd[j - 1]), la1 = std::log(asd[j]);
  const double t = (std::log(f_hz) - lf0) / (lf1 - lf0);
  return std::exp(la0 + t * (la1 - la0));
}

double Cosmology::comoving_mpc(double z) const {
  // Simpson on a fixed subdivision; the tolerance budget here is far below
  // the horizon bisection's.
  const int n = 512;
  const double h = z / n;
  auto integrand = [&](double zz) {
    return 1.0 / std::sqrt(omega_m * std::pow(1.0 + zz, 3) + (1.0 - omega_m));
  };
  double s = integrand(0.0) + integrand(z);
  for (int i = 1; i < n; ++i)
    s += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  const double hubble_dist_mpc = c_light / (h0_km_s_mpc * 1000.0);
  return hubble_dist_mpc * s * h / 3.0;
}

double Cosmology::luminosity_mpc(double z) const {
  return (1.0 + z) * comoving_mpc(z);
}

AsdTable combine_asd(const std::vector<AsdTable>& tables,
                     const FrequencyGrid& grid) {
  if (tables.empty()) throw std::invalid_argument("combine_asd: no tables");
  double lo = 0.0, hi = 1e300;
  for (const auto& t : tables) {
    t.validate();
    lo = std::max(lo, t.fmin());
    hi = std::min(hi, t.fmax());
  }
  if (!(lo < hi))
    throw std::invalid_argument("combine_asd: disjoint frequency supports");
  AsdTable out;
  out.label = "combined";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = grid.hz(i);
    if (f < lo || f > hi) continue;
    double p = 0.0;
    for (const auto& t : tables) {
      const double a = t.at(f);
      p += a * a;
    }
    out.freq_hz.push_back(f);
    out.asd.push_back(std::sqrt(p));
  }
  if (out.freq_hz.size() < 2)
    throw std::invalid_argument(
        "combine_asd: grid does not overlap the common support");
  return out;
}

namespace {

double chirp_mass_kg(double total_mass_kg) {
  // equal-mass: eta = 1/4
  return total_mass_kg * std::pow(0.25, 0.6);
}

double f_isco_hz(double total_mass_kg) {
  return c_light * c_light * c_light /
         (std::pow(6.0, 1.5) * pi * G_newton * total_mass_kg);
}

/// 4 * Integral f^{-7/3} / S(f) df up to fcut, trapezoid on the table grid
/// with a partial last interval.
double band_integral(const AsdTable& asd, double fcut) {
  const auto& f = asd.freq_hz;
  if (fcut <= f.front()) return 0.0;
  auto weight = [&](double ff) {
    const double a = asd.at(ff);
    return std::pow(ff, -7.0 / 3.0) / (a * a);
  };
  double acc = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double f1 = std::min(f[i], fcut);
    if (f1 <= f[i - 1]) break;
    acc += 0.5 * (weight(f[i - 1]) + weight(f1)) * (f1 - f[i - 1]);
    if (f1 == fcut) break;
  }
  return 4.0 * acc;
}

double snr_from(const AsdTable& asd, double mz_total_kg, double dl_m) {
  const double mc = chirp_mass_kg(mz_total_kg);
  const double integral = band_integral(asd, f_isco_hz(mz_total_kg));
  const double amp2 = (5.0 / 24.0) * std::pow(pi, -4.0 / 3.0) * c_light *
                      c_light *
                      std::pow(G_newton * mc / (c_light * c_light * c_light),
                               5.0 / 3.0) /
                      (dl_m * dl_m);
  return std::sqrt(amp2 * integral);
}

} // namespace

double snr_local(const AsdTable& asd, double total_mass_msun,
                 double distance_mpc) {
  if (!(total_mass_msun > 0.0))
    throw std::invalid_argument("snr_local: mass must be > 0");
  return snr_from(asd, total_mass_msun * M_sun, distance_mpc * Mpc);
}

double snr_at(const AsdTable& asd, double total_mass_msun, double z,
              const Cosmology& cosmo) {
  const double mz = total_mass_msun * (1.0 + z) * M_sun;
  return snr_from(asd, mz, cosmo.luminosity_mpc(z) * Mpc);
}

HorizonPoint horizon(const AsdTable& asd, double total_mass_msun,
                     double snr_threshold, const Cosmology& cosmo) {
  if (!(total_mass_msun > 0.0))
    throw std::invalid_argument("horizon: mass must be > 0");
  asd.validate();
  HorizonPoint hp;
  if (f_isco_hz(total_mass_msun * M_sun) < asd.fmin()) {
    hp.isco_below_band = true;
    return hp;
  }
  double zlo = 1e-9;
  if (snr_at(asd, total_mass_msun, zlo, cosmo) < snr_threshold) return hp;
  double zhi = 1.0;
  while (snr_at(asd, total_mass_msun, zhi, cosmo) >= snr_threshold) {
    zhi *= 2.0;
    if (zhi > 1e6) break;
  }
  for (int i = 0; i < 120; ++i) {
    const double zm = 0.5 * (zlo + zhi);
    if (snr_at(asd, total_mass_msun, zm, cosmo) >= snr_threshold)
      zlo = zm;
    else
      zhi = zm;
  }
  hp.redshift = 0.5 * (zlo + zhi);
  hp.distance_mpc = cosmo.luminosity_mpc(hp.redshift);
  return hp;
}

HorizonCurve horizon_curve(const AsdTable& asd,
                           const std::vector<double>& masses_msun,
                           double snr_threshold, const Cosmology& cosmo,
                           Exec exec) {
  HorizonCurve hc;
  hc.mass_msun = masses_msun;
  hc.distance_mpc.resize(masses_msun.size());
  hc.redshift.resize(masses_msun.size());
  parallel_for(masses_msun.size(), exec, [&](std::size_t i) {
    const HorizonPoint hp = horizon(asd, masses_msun[i], snr_threshold, cosmo);
    hc.distance_mpc[i] = hp.distance_mpc;
    hc.redshift[i] = hp.redshift;
  });
  return hc;
}

} // namespace qtfds
