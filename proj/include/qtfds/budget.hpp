#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qtfds/grid.hpp"
#include "qtfds/parallel.hpp"
#include "qtfds/plant.hpp"
#include "qtfds/registry.hpp"

namespace qtfds {

/// Optical loss figures. fc_* apply to the baseline FDS scheme only.
struct LossBudgetParams {
  double injection = 0.04;
  double arm_rtl = 45e-6;
  double sec_loss = 1000e-6;
  double readout = 0.03;
  double fc_rtl = 20e-6;
  double fc_length = 1000.0;  // m

  void validate() const;
};

/// RMS phase/length noise figures. fc_length_rms applies to the baseline only.
struct PhaseNoiseParams {
  double squeezer_rms = 10e-3;    // rad
  double lo_rms = 10e-3;          // rad
  double sec_length_rms = 1e-12;  // m
  double fc_length_rms = 1e-12;   // m

  void validate() const;
};

/// Filter parameters for the QT scheme: the two idler effective cavities in
/// the table sign convention. Loss rates are derived from the same SEC phase
/// that realizes each bandwidth.
struct QtSchemeParams {
  double squeeze_db = 15.0;
  double victor_angle = 1.5707963267948966;  // source ellipse orientation
  double gamma_a = 0.0, delta_a = 0.0;       // Alice filter (rad/s)
  double gamma_v = 0.0, delta_v = 0.0;       // Victor filter (rad/s)
};

/// Baseline FDS: one squeezed beam through two external filter cavities.
struct BaselineSchemeParams {
  double squeeze_db = 10.0;
  double source_angle = 1.5707963267948966;
  double gamma_1 = 0.0, delta_1 = 0.0;  // first cavity (rad/s)
  double gamma_2 = 0.0, delta_2 = 0.0;  // second cavity (rad/s)
};

/// Per-frequency strain-referred decomposition of the output PSD by noise
/// source. Components are defined disjointly by injection point and sum to
/// the total exactly; phase-noise corrections are folded into the AS-port
/// component. The reference is the same configuration with the squeezer off
/// and no phase noise.
struct NoiseBudget {
  FrequencyGrid grid;
  std::vector<double> total;                             // strain PSD, 1/Hz
  std::map<std::string, std::vector<double>> components; // strain PSD
  std::vector<double> reference;                         // no-squeeze strain PSD
  std::vector<double> sql;                               // h_SQL^2 reference
  std::vector<double> improvement_db() const;            // 10 log10(ref/total)
};

/// Loss description of an idler filter realized at a given target bandwidth.
/// The SEC buildup factor is pinned by the bandwidth requirement, so the loss
/// rates do not depend on the branch integer.
LossyIdler lossy_idler_from_target(const PlantParams& p, double gamma_target,
                                   double delta_target);

/// Second-order Gaussian average of a PSD under a quadrature-angle jitter of
/// RMS sigma: (1 - sigma^2) S(chi) + sigma^2 S(chi + pi/2). Rejects
/// sigma >= 0.3 rad (expansion invalid).
double phase_noise_average(const std::function<double(double)>& s_of_angle,
                           double chi, double sigma);

/// Effective quadrature-angle jitter of the SEC length noise,
/// (2 pi dL / lambda) * F_sec with F_sec the SEC finesse.
double sec_angle_jitter(const PlantParams& p, double sec_length_rms);

/// Divides an output PSD by the carrier signal transfer |T_sig|^2 (including
/// readout loss) to refer it to strain.
std::vector<double> strain_referral(const std::vector<double>& output_psd,
                                    const PlantParams& p,
                                    const LossBudgetParams& losses,
                                    const FrequencyGrid& grid);

/// h_SQL^2 over the grid.
std::vector<double> sql_curve(const PlantParams& p, const FrequencyGrid& grid);

NoiseBudget qt_budget(const PlantParams& p, const QtSchemeParams& scheme,
                      const LossBudgetParams& losses,
                      const PhaseNoiseParams& noise, const FrequencyGrid& grid,
                      Exec exec = Exec::OpenMP);

NoiseBudget baseline_fds_budget(const PlantParams& p,
                                const BaselineSchemeParams& scheme,
                                const LossBudgetParams& losses,
                                const PhaseNoiseParams& noise,
                                const FrequencyGrid& grid,
                                Exec exec = Exec::OpenMP);

/// No-squeeze reference as a standalone budget (squeezer off, losses on).
NoiseBudget no_squeeze_budget(const PlantParams& p,
                              const LossBudgetParams& losses,
                              const FrequencyGrid& grid,
                              Exec exec = Exec::OpenMP);

} // namespace qtfds
