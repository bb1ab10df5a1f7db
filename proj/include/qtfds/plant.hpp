#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qtfds {

/// Interferometer constants (defaults: the ETLF design point).
struct PlantParams {
  double wavelength = 1550e-9;  // m
  double T_itm = 7000e-6;       // ITM power transmissivity
  double T_sem = 0.20;          // SEM power transmissivity
  double mirror_mass = 211.0;   // kg
  /// Effective mass entering the back-action normalization. The published
  /// filter parameters and the sub-10-Hz spring position pin this to the
  /// mirror mass for the ETLF numbers; override if your bookkeeping differs.
  double reduced_mass = 211.0;  // kg
  double bs_power = 63.0;       // W at the beamsplitter
  /// Arm circulating power; <= 0 means derive (bs_power/2) * 4/T_itm.
  double arm_power = 0.0;                  // W
  double phi0 = 0.75;                      // SEC carrier detuning (rad)
  double L_arm = 6451612903.0 * 1550e-9;   // m
  double L_sec = 64516129.0 * 1550e-9;     // m
  double arm_rtl = 45e-6;                  // arm round-trip loss
  double sec_loss = 1000e-6;               // SEC round-trip loss

  void validate() const;

  double arm_power_or_default() const;
  double omega0() const;             // carrier angular frequency
  double gamma_1arm() const;         // c T_itm / (4 L_arm)
  double theta_pond() const;         // 8 w0 P_c / (M c L), rad^3/s^3
  double fsr_arm() const;            // pi c / L_arm (rad/s)
  double fsr_sec() const;            // pi c / L_sec (rad/s)
  double signal_gain() const;        // L sqrt(theta_pond * M / hbar)
};

/// Effective single detuned cavity: half-bandwidth, detuning and normalized
/// power. theta_pond is zero for idler beams.
struct EffectiveCavity {
  double gamma = 0.0;       // rad/s, > 0
  double delta = 0.0;       // rad/s
  double theta_pond = 0.0;  // rad^3/s^3
};

/// Frequency-dependent gain, quadrature rotation and phase of the active beam.
struct PlantResponse {
  double gain = 0.0;   // Gamma
  double theta = 0.0;  // rad
  double beta = 0.0;   // rad
};

/// Scaling-law ratio (1 - sqrt(R_sem) e^{2 i phi}) / (1 + sqrt(R_sem) e^{2 i phi}).
std::complex<double> scaling_ratio(const PlantParams& p, double phi_sec);

/// Effective (gamma, delta, Theta) seen by the carrier at SEC phase phi0.
EffectiveCavity carrier_effective_cavity(const PlantParams& p);

/// Per-frequency numerator matrix C and denominator M~ of the ponderomotive
/// response. Throws std::domain_error at a resonance singularity M~ = 0.
std::pair<Eigen::Matrix2cd, std::complex<double>> ponderomotive_matrix(
    const EffectiveCavity& cav, double omega);

/// C / M~ as one 2x2 transfer.
Eigen::Matrix2cd plant_transfer(const EffectiveCavity& cav, double omega);

/// (Gamma, theta_b, beta_b) with the quadrant fixed so that
/// Gamma e^{i beta} (cos theta, -sin theta) reproduces the phase row exactly.
PlantResponse plant_angles(const EffectiveCavity& cav, double omega);

/// One-way SEC phase seen by a beam detuned by `delta_beam` from the carrier.
double idler_phi(const PlantParams& p, double delta_beam);

/// Effective (gamma, delta) of the interferometer acting as a filter cavity
/// for an idler at detuning `delta_beam`. The returned delta follows the
/// filter-target sign convention of the parameter tables; the quadrature
/// transfer uses the opposite sign internally (see idler_transfer).
EffectiveCavity idler_response(const PlantParams& p, double delta_beam);

/// Effective loss description of the idler filter cavity.
struct LossyIdler {
  EffectiveCavity cav;     // lossless (gamma, delta)
  double gamma_loss_arm = 0.0;  // c A_arm / (4 L_arm)
  double gamma_loss_sec = 0.0;  // gamma_1arm A_sec / (SEC buildup denominator)
  double a_eff = 0.0;           // effective round-trip loss of the L_arm cavity
  double gamma_total() const {
    return cav.gamma + gamma_loss_arm + gamma_loss_sec;
  }
};

LossyIdler lossy_idler_response(const PlantParams& p, double delta_beam);

/// Rotation angle and phase of the empty-cavity (Theta = 0) idler transfer at
/// omega, in the row convention A2 = e^{i beta} (a1 sin theta + a2 cos theta).
std::pair<double, double> idler_rotation(const EffectiveCavity& cav,
                                         double omega);

/// Transfer maps of one beam through the effective cavity, with loss vacua and
/// the strain drive. Built from the single-mode state space; for zero loss the
/// input map equals C / M~ exactly.
struct BeamMaps {
  Eigen::Matrix2cd t_in;    // registered input -> output pair
  Eigen::Matrix2cd t_arm;   // arm-loss vacuum -> output pair
  Eigen::Matrix2cd t_sec;   // SEC-loss vacuum -> output pair
  Eigen::Vector2cd t_sig;   // strain h -> output pair
};

/// Carrier beam (ponderomotive, optional strain drive with gain Gh).
BeamMaps carrier_maps(const EffectiveCavity& cav, double gamma_arm,
                      double gamma_sec, double gh, double omega);

/// Idler beam: empty cavity with table-sign detuning flipped internally.
BeamMaps idler_maps(const LossyIdler& idler, double omega);

/// Standard quantum limit reference, h_SQL = sqrt(8 hbar / (M Omega^2 L^2)).
double h_sql(const PlantParams& p, double omega);

} // namespace qtfds
