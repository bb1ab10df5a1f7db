#pragma once

#include <string>
#include <vector>

#include "qtfds/grid.hpp"
#include "qtfds/parallel.hpp"

namespace qtfds {

/// Amplitude spectral density samples (frequency in Hz, ASD in 1/sqrt(Hz)).
struct AsdTable {
  std::vector<double> freq_hz;
  std::vector<double> asd;
  std::string label;

  void validate() const;
  double fmin() const { return freq_hz.front(); }
  double fmax() const { return freq_hz.back(); }
  /// Log-log interpolated ASD; clamps outside the support.
  double at(double f_hz) const;
};

/// Flat Lambda-CDM background used for the luminosity distance.
struct Cosmology {
  double h0_km_s_mpc = 67.9;
  double omega_m = 0.3065;

  double comoving_mpc(double z) const;
  double luminosity_mpc(double z) const;
};

/// Quadrature sum of several tables after log-log interpolation onto the
/// grid, restricted to the intersection of their supports. Throws when the
/// supports (or the grid) do not overlap.
AsdTable combine_asd(const std::vector<AsdTable>& tables,
                     const FrequencyGrid& grid);

struct HorizonPoint {
  double distance_mpc = 0.0;
  double redshift = 0.0;
  bool isco_below_band = false;  // flagged: ISCO under the lowest table point
};

/// Optimal-orientation SNR of an equal-mass non-spinning inspiral
/// (f^{-7/6} restricted amplitude, ISCO cutoff) at a fixed luminosity
/// distance, ignoring redshift. Oracle helper for the 1/D scaling law.
double snr_local(const AsdTable& asd, double total_mass_msun,
                 double distance_mpc);

/// Redshifted SNR at redshift z.
double snr_at(const AsdTable& asd, double total_mass_msun, double z,
              const Cosmology& cosmo);

/// Luminosity distance and redshift at which the binary reaches the SNR
/// threshold. Distance 0 when the threshold is unreachable at z -> 0.
HorizonPoint horizon(const AsdTable& asd, double total_mass_msun,
                     double snr_threshold = 8.0, const Cosmology& cosmo = {});

struct HorizonCurve {
  std::vector<double> mass_msun;
  std::vector<double> distance_mpc;
  std::vector<double> redshift;
};

HorizonCurve horizon_curve(const AsdTable& asd,
                           const std::vector<double>& masses_msun,
                           double snr_threshold = 8.0,
                           const Cosmology& cosmo = {},
                           Exec exec = Exec::OpenMP);

} // namespace qtfds
