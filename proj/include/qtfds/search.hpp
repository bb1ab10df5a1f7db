#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qtfds/grid.hpp"
#include "qtfds/parallel.hpp"
#include "qtfds/plant.hpp"

namespace qtfds {

/// Target filter-cavity pairs (table sign convention) and the band over which
/// the rotation-compensation residual is scored.
struct SearchTargets {
  double gamma1 = 0.0, delta1 = 0.0;  // rad/s
  double gamma2 = 0.0, delta2 = 0.0;  // rad/s
  double band_fmin_hz = 1.0;
  double band_fmax_hz = 100.0;
  double angle_tolerance = 0.5;  // max acceptable in-band |angle error| (rad)

  void validate() const;
};

/// Integer search ranges and the beam-detuning windows used to prune the SEC
/// branch integers.
struct SearchRanges {
  std::int64_t q_min = -50000, q_max = 50000;
  std::int64_t p_min = -50000, p_max = 50000;
  std::int64_t n_min = 1, n_max = 1000;
  /// Allowed windows for the beam detunings (Hz); branch integers outside them
  /// are pruned. Defaults bracket the published values by +-1%.
  double delta_a_min_hz = 315.8e6, delta_a_max_hz = 323.2e6;
  double delta_v_min_hz = 952.4e6, delta_v_max_hz = 971.6e6;
};

/// Thrown when a target bandwidth is unreachable for the given mirrors
/// (arccos domain violation in the branch equation).
struct UnreachableBandwidth : std::domain_error {
  using std::domain_error::domain_error;
};

/// Beam detuning (rad/s) realizing effective bandwidth gamma_target in SEC
/// branch n. Throws UnreachableBandwidth outside the arccos domain.
double solve_detuning(const PlantParams& p, double gamma_target,
                      std::int64_t n);

/// Wrapped compensation residual theta_b + theta_a + theta_v + pi/2 (mod pi),
/// in (-pi/2, pi/2]. Zero means the idler rotations exactly undo the plant
/// rotation.
double angle_error(const EffectiveCavity& carrier, const EffectiveCavity& fc_a,
                   const EffectiveCavity& fc_v, double omega);

std::vector<double> angle_error_curve(const EffectiveCavity& carrier,
                                      const EffectiveCavity& fc_a,
                                      const EffectiveCavity& fc_v,
                                      const FrequencyGrid& grid);

struct SearchResult {
  double delta_a = 0.0, delta_v = 0.0;      // rad/s
  std::int64_t n_a = 0, n_v = 0, q = 0, p = 0;
  double arm_length = 0.0, sec_length = 0.0;  // tuned lengths (m)
  EffectiveCavity achieved_a, achieved_v;     // achieved (gamma, delta)
  double max_angle_error = 0.0;               // over the band
  std::vector<double> angle_error_hz;         // band grid (Hz)
  std::vector<double> angle_error_rad;
};

/// True when the tuple is inside the ranges, both branch equations have
/// arccos-domain solutions, and the beam detunings land in the windows.
bool candidate_feasible(const PlantParams& nominal, const SearchTargets& t,
                        const SearchRanges& r, std::int64_t q, std::int64_t p,
                        std::int64_t n_a, std::int64_t n_v);

/// Grid search over (q, p, n_a, n_v) minimizing the achieved-detuning error
/// against the targets, then the in-band angle residual among the leading
/// candidates. `nominal` carries the untuned lengths; the result lengths are
/// nominal + q*lambda and + p*lambda. Throws std::runtime_error when no
/// feasible candidate exists.
SearchResult search_lengths(const PlantParams& nominal, const SearchTargets& t,
                            const SearchRanges& r = {},
                            Exec exec = Exec::OpenMP);

/// Numerically fitted two-filter decomposition of the plant rotation:
/// minimizes the in-band max |angle error| over (gamma1, delta1, gamma2,
/// delta2), seeded at `seed`. Returns the fitted targets; `residual` reports
/// the achieved minimax error.
SearchTargets target_filters_from_plant(const EffectiveCavity& carrier,
                                        const SearchTargets& seed,
                                        double* residual = nullptr);

} // namespace qtfds
