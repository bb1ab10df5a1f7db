#include "qtfds/plant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtfds/constants.hpp"

namespace qtfds {

using std::numbers::pi;
using namespace constants;

void PlantParams::validate() const {
  auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in01(T_itm) || !in01(T_sem) || !in01(arm_rtl) || !in01(sec_loss))
    throw std::invalid_argument("PlantParams: transmissivity/loss outside [0,1]");
  if (!(wavelength > 0) || !(mirror_mass > 0) || !(reduced_mass > 0) ||
      !(bs_power > 0) || !(L_arm > 0) || !(L_sec > 0))
    throw std::invalid_argument("PlantParams: lengths, masses, powers must be > 0");
}

double PlantParams::arm_power_or_default() const {
  if (arm_power > 0.0) return arm_power;
  return (bs_power / 2.0) * 4.0 / T_itm;  // lossless Fabry-Perot buildup
}

double PlantParams::omega0() const { return 2.0 * pi * c_light / wavelength; }

double PlantParams::gamma_1arm() const { return c_light * T_itm / (4.0 * L_arm); }

double PlantParams::theta_pond() const {
  return 8.0 * omega0() * arm_power_or_default() /
         (reduced_mass * c_light * L_arm);
}

double PlantParams::fsr_arm() const { return pi * c_light / L_arm; }
double PlantParams::fsr_sec() const { return pi * c_light / L_sec; }

double PlantParams::signal_gain() const {
  return L_arm * std::sqrt(theta_pond() * reduced_mass / hbar);
}

std::complex<double> scaling_ratio(const PlantParams& p, double phi_sec) {
  const std::complex<double> z =
      std::sqrt(1.0 - p.T_sem) * std::exp(std::complex<double>(0.0, 2.0 * phi_sec));
  return (1.0 - z) / (1.0 + z);
}

EffectiveCavity carrier_effective_cavity(const PlantParams& p) {
  p.validate();
  const double phi_c = (pi - p.phi0) / 2.0;
  const auto ratio = scaling_ratio(p, phi_c);
  return {p.gamma_1arm() * ratio.real(), -p.gamma_1arm() * ratio.imag(),
          p.theta_pond()};
}

std::pair<Eigen::Matrix2cd, std::complex<double>> ponderomotive_matrix(
    const EffectiveCavity& cav, double omega) {
  const double g = cav.gamma, d = cav.delta, th = cav.theta_pond;
  const double om2 = omega * omega;
  const std::complex<double> gm(g, -omega);
  const std::complex<double> mt = (gm * gm + d * d) * om2 - d * th;
  if (std::abs(mt) == 0.0)
    throw std::domain_error("ponderomotive_matrix: resonance singularity at omega = " +
                            std::to_string(omega));
  const double c11 = om2 * (om2 - d * d + g * g) + d * th;
  const double c12 = 2.0 * d * g * om2 - 2.0 * g * th;
  const double c21 = -2.0 * d * g * om2;
  Eigen::Matrix2cd cm;
  cm << c11, c12, c21, c11;
  return {cm, mt};
}

Eigen::Matrix2cd plant_transfer(const EffectiveCavity& cav, double omega) {
  auto [cm, mt] = ponderomotive_matrix(cav, omega);
  return cm / mt;
}

PlantResponse plant_angles(const EffectiveCavity& cav, double omega) {
  auto [cm, mt] = ponderomotive_matrix(cav, omega);
  const double c21 = cm(1, 0).real(), c22 = cm(1, 1).real();
  if (c21 == 0.0 && c22 == 0.0)
    throw std::domain_error("plant_angles: degenerate phase row (C21 = C22 = 0)");
  PlantResponse r;
  r.gain = std::hypot(c21, c22) / std::abs(mt);
  r.theta = std::atan2(-c22, c21);
  r.beta = std::arg(std::conj(mt));
  return r;
}

double idler_phi(const PlantParams& p, double delta_beam) {
  return (pi - p.phi0) / 2.0 + delta_beam * p.L_sec / c_light;
}

namespace {

double centered_mod(double x, double period) {
  double m = std::remainder(x, period);  // already in [-period/2, period/2]
  return m;
}

} // namespace

EffectiveCavity idler_response(const PlantParams& p, double delta_beam) {
  if (!(delta_beam > 0.0))
    throw std::invalid_argument("idler_response: beam detuning must be > 0");
  const double phi = idler_phi(p, delta_beam);
  const auto ratio = scaling_ratio(p, phi);
  const double gam = p.gamma_1arm() * ratio.real();
  const double mod = centered_mod(delta_beam, p.fsr_arm());
  const double del = mod - p.gamma_1arm() * ratio.imag();
  return {gam, del, 0.0};
}

LossyIdler lossy_idler_response(const PlantParams& p, double delta_beam) {
  LossyIdler li;
  li.cav = idler_response(p, delta_beam);
  const double phi = idler_phi(p, delta_beam);
  const double rsem = 1.0 - p.T_sem;
  const double denom = 1.0 + 2.0 * std::sqrt(rsem) * std::cos(2.0 * phi) + rsem;
  li.a_eff = p.T_itm * p.sec_loss / denom + p.arm_rtl;
  li.gamma_loss_arm = c_light * p.arm_rtl / (4.0 * p.L_arm);
  li.gamma_loss_sec = c_light * (li.a_eff - p.arm_rtl) / (4.0 * p.L_arm);
  return li;
}

std::pair<double, double> idler_rotation(const EffectiveCavity& cav,
                                         double omega) {
  // internal detuning is the negated table-sign value
  const double g = cav.gamma, d = -cav.delta;
  const double cc = omega * omega + g * g - d * d;
  const double ss = 2.0 * d * g;
  const double theta = std::atan2(-ss, cc);
  const std::complex<double> gm(g, -omega);
  const std::complex<double> m = gm * gm + d * d;
  return {theta, std::arg(std::conj(m))};
}

namespace {

/// Single-mode state space shared by carrier and idlers. Printed-matrix
/// convention: quadrature 2 drives the mirror, the mirror drives quadrature 1,
/// out = -in + sqrt(2 gamma_in) a_cav.
BeamMaps state_space_maps(double gamma_in, double gamma_arm, double gamma_sec,
                          double delta_internal, double theta_pond, double gh,
                          double omega) {
  const double gt = gamma_in + gamma_arm + gamma_sec;
  const double k = theta_pond / (omega * omega);
  Eigen::Matrix2cd a;
  a << std::complex<double>(gt, -omega), k - delta_internal, delta_internal,
      std::complex<double>(gt, -omega);
  const Eigen::Matrix2cd ainv = a.inverse();
  BeamMaps m;
  m.t_in = -Eigen::Matrix2cd::Identity() + 2.0 * gamma_in * ainv;
  m.t_arm = 2.0 * std::sqrt(gamma_in * gamma_arm) * ainv;
  m.t_sec = 2.0 * std::sqrt(gamma_in * gamma_sec) * ainv;
  m.t_sig = std::sqrt(2.0 * gamma_in) * gh * ainv.col(0);
  return m;
}

} // namespace

BeamMaps carrier_maps(const EffectiveCavity& cav, double gamma_arm,
                      double gamma_sec, double gh, double omega) {
  return state_space_maps(cav.gamma, gamma_arm, gamma_sec, cav.delta,
                          cav.theta_pond, gh, omega);
}

BeamMaps idler_maps(const LossyIdler& idler, double omega) {
  return state_space_maps(idler.cav.gamma, idler.gamma_loss_arm,
                          idler.gamma_loss_sec, -idler.cav.delta, 0.0, 0.0,
                          omega);
}

double h_sql(const PlantParams& p, double omega) {
  return std::sqrt(8.0 * hbar /
                   (p.reduced_mass * omega * omega * p.L_arm * p.L_arm));
}

} // namespace qtfds
