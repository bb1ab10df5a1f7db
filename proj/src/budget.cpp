#include "qtfds/budget.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtfds/constants.hpp"
#include "qtfds/sources.hpp"
#include "qtfds/transfer.hpp"

namespace qtfds {

using std::numbers::pi;
using namespace constants;
using RowV = Eigen::RowVectorXcd;

void LossBudgetParams::validate() const {
  for (double x : {injection, arm_rtl, sec_loss, readout, fc_rtl})
    if (x < 0.0 || x > 1.0)
      throw std::invalid_argument("LossBudgetParams: loss outside [0,1]");
  if (!(fc_length > 0.0))
    throw std::invalid_argument("LossBudgetParams: fc_length must be > 0");
}

void PhaseNoiseParams::validate() const {
  for (double x : {squeezer_rms, lo_rms, sec_length_rms, fc_length_rms})
    if (x < 0.0) throw std::invalid_argument("PhaseNoiseParams: negative rms");
}

LossyIdler lossy_idler_from_target(const PlantParams& p, double gamma_target,
                                   double delta_target) {
  if (!(gamma_target > 0.0))
    throw std::invalid_argument("lossy_idler_from_target: gamma must be > 0");
  const double rsem = 1.0 - p.T_sem;
  const double x = (p.T_sem * p.gamma_1arm() / gamma_target - 1.0 - rsem) /
                   (2.0 * std::sqrt(rsem));
  if (x < -1.0 || x > 1.0)
    throw std::domain_error("lossy_idler_from_target: bandwidth unreachable");
  LossyIdler li;
  li.cav = {gamma_target, delta_target, 0.0};
  // SEC buildup denominator is pinned by the bandwidth requirement:
  // denom = T_sem * gamma_1arm / gamma_target
  li.gamma_loss_sec = p.sec_loss * gamma_target / p.T_sem;
  li.gamma_loss_arm = c_light * p.arm_rtl / (4.0 * p.L_arm);
  li.a_eff = p.T_itm * p.sec_loss * gamma_target / (p.T_sem * p.gamma_1arm()) +
             p.arm_rtl;
  return li;
}

double phase_noise_average(const std::function<double(double)>& s_of_angle,
                           double chi, double sigma) {
  if (sigma < 0.0 || sigma >= 0.3)
    throw std::invalid_argument(
        "phase_noise_average: rms must be in [0, 0.3) rad");
  if (sigma == 0.0) return s_of_angle(chi);
  const double s2 = sigma * sigma;
  return (1.0 - s2) * s_of_angle(chi) + s2 * s_of_angle(chi + pi / 2.0);
}

double sec_angle_jitter(const PlantParams& p, double sec_length_rms) {
  const double rsem = 1.0 - p.T_sem;
  const double finesse =
      pi * std::pow(rsem, 0.25) / (1.0 - std::sqrt(rsem));
  return (2.0 * pi * sec_length_rms / p.wavelength) * finesse;
}

std::vector<double> sql_curve(const PlantParams& p, const FrequencyGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double h = h_sql(p, grid.omega(i));
    out[i] = h * h;
  }
  return out;
}

namespace {

struct CarrierLoss {
  double gamma_arm = 0.0;
  double gamma_sec = 0.0;
};

CarrierLoss carrier_loss_rates(const PlantParams& p,
                               const LossBudgetParams& losses,
                               const EffectiveCavity& carrier) {
  CarrierLoss cl;
  cl.gamma_arm = c_light * losses.arm_rtl / (4.0 * p.L_arm);
  cl.gamma_sec = losses.sec_loss * carrier.gamma / p.T_sem;
  return cl;
}

/// Angle offsets used by the second-order phase-noise averaging.
struct Jitter {
  double lo = 0.0;   // homodyne / Bell LO
  double sqz = 0.0;  // squeezer pump phase (rotates all source ellipses)
  double sec = 0.0;  // SEC-induced output-quadrature rotation
  double dfc1 = 0.0, dfc2 = 0.0;  // baseline filter-cavity detuning shifts
};

Eigen::RowVector2cd measured_quadrature(double lo) {
  Eigen::RowVector2cd w;
  w << std::sin(lo), std::cos(lo);
  return w;
}

// ---------------------------------------------------------------------------
// QT scheme
// ---------------------------------------------------------------------------

// column offsets (2 per port)
namespace qt_col {
constexpr Eigen::Index victor = 0, alice = 2, bob = 4, inj_v = 6, inj_a = 8,
                       inj_b = 10, arm_v = 12, arm_a = 14, arm_b = 16,
                       sec_v = 18, sec_a = 20, sec_b = 22, ro_b2 = 24,
                       ro_a1 = 26, ro_a2 = 28, dim = 30;
}

struct QtAssembly {
  RowV b2, a1, a2;   // rows over the 30 input quadratures
  cd t_sig;          // strain -> measured B2
};

struct QtContext {
  PlantParams plant;
  EffectiveCavity carrier;
  CarrierLoss carrier_loss;
  LossyIdler fc_a, fc_v;
  double eta_inj = 0.0, eta_ro = 0.0;
  double gh = 0.0;
};

QtAssembly qt_rows(const QtContext& ctx, double omega, const Jitter& j) {
  using namespace qt_col;
  const double se_i = std::sqrt(1.0 - ctx.eta_inj),
               se_r = std::sqrt(1.0 - ctx.eta_ro);
  const double si = std::sqrt(ctx.eta_inj), sr = std::sqrt(ctx.eta_ro);

  BeamMaps b = carrier_maps(ctx.carrier, ctx.carrier_loss.gamma_arm,
                            ctx.carrier_loss.gamma_sec, ctx.gh, omega);
  BeamMaps a = idler_maps(ctx.fc_a, omega);
  BeamMaps v = idler_maps(ctx.fc_v, omega);

  // SEC length jitter rotates the fields behind the plant but not the strain
  // reference; squeezer jitter rotates the source ellipses.
  const Eigen::Matrix2d rsec = rotation(j.sec);
  const Eigen::Matrix2d rsqz = rotation(j.sqz);

  Eigen::Matrix<cd, 2, qt_col::dim> rb =
      Eigen::Matrix<cd, 2, qt_col::dim>::Zero();
  rb.block<2, 2>(0, bob) = rsec * b.t_in * rsqz * se_i;
  rb.block<2, 2>(0, inj_b) = rsec * b.t_in * si;
  rb.block<2, 2>(0, arm_b) = rsec * b.t_arm;
  rb.block<2, 2>(0, sec_b) = rsec * b.t_sec;

  Eigen::Matrix<cd, 2, qt_col::dim> rv =
      Eigen::Matrix<cd, 2, qt_col::dim>::Zero();
  rv.block<2, 2>(0, victor) = rsec * v.t_in * rsqz * se_i;
  rv.block<2, 2>(0, inj_v) = rsec * v.t_in * si;
  rv.block<2, 2>(0, arm_v) = rsec * v.t_arm;
  rv.block<2, 2>(0, sec_v) = rsec * v.t_sec;

  Eigen::Matrix<cd, 2, qt_col::dim> ra =
      Eigen::Matrix<cd, 2, qt_col::dim>::Zero();
  ra.block<2, 2>(0, alice) = rsec * a.t_in * rsqz * se_i;
  ra.block<2, 2>(0, inj_a) = rsec * a.t_in * si;
  ra.block<2, 2>(0, arm_a) = rsec * a.t_arm;
  ra.block<2, 2>(0, sec_a) = rsec * a.t_sec;

  QtAssembly out;
  out.b2 = se_r * (measured_quadrature(j.lo) * rb);
  out.b2(ro_b2 + 1) += sr;

  // Bell measurement: LO jitter rotates both idler frames
  const Eigen::Matrix2d rlo = rotation(j.lo);
  Eigen::Matrix<cd, 2, qt_col::dim> vr = rlo * rv, ar = rlo * ra;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  out.a1 = se_r * inv_sqrt2 * (vr.row(0) - ar.row(0));
  out.a1(ro_a1) += sr;
  out.a2 = se_r * inv_sqrt2 * (vr.row(1) + ar.row(1));
  out.a2(ro_a2 + 1) += sr;

  out.t_sig = se_r * (measured_quadrature(j.lo) * b.t_sig)(0, 0);
  return out;
}

Eigen::MatrixXd qt_covariance(double r, double victor_angle) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(qt_col::dim, qt_col::dim);
  s.block<2, 2>(qt_col::victor, qt_col::victor) =
      squeezed_block(r, victor_angle);
  s.block<4, 4>(qt_col::alice, qt_col::alice) = epr_block(r);
  return s;
}

double block_power(const RowV& row, const Eigen::MatrixXd& s,
                   Eigen::Index col, Eigen::Index width) {
  const auto seg = row.segment(col, width);
  return (seg * s.block(col, col, width, width) * seg.adjoint())(0, 0).real();
}

// ---------------------------------------------------------------------------
// baseline FDS scheme
// ---------------------------------------------------------------------------

namespace base_col {
constexpr Eigen::Index sqz = 0, inj = 2, fc1 = 4, fc2 = 6, arm_b = 8,
                       sec_b = 10, ro = 12, dim = 14;
}

struct BaseContext {
  PlantParams plant;
  EffectiveCavity carrier;
  CarrierLoss carrier_loss;
  EffectiveCavity fc1, fc2;  // table-sign detunings
  double gamma_fc_loss = 0.0;
  double eta_inj = 0.0, eta_ro = 0.0;
  double gh = 0.0;
};

struct BaseAssembly {
  RowV b2;
  cd t_sig;
};

BaseAssembly base_rows(const BaseContext& ctx, double omega, const Jitter& j) {
  using namespace base_col;
  const double se_i = std::sqrt(1.0 - ctx.eta_inj),
               se_r = std::sqrt(1.0 - ctx.eta_ro);
  const double si = std::sqrt(ctx.eta_inj), sr = std::sqrt(ctx.eta_ro);

  BeamMaps b = carrier_maps(ctx.carrier, ctx.carrier_loss.gamma_arm,
                            ctx.carrier_loss.gamma_sec, ctx.gh, omega);
  LossyIdler f1{{ctx.fc1.gamma, ctx.fc1.delta + j.dfc1, 0.0},
                ctx.gamma_fc_loss, 0.0, 0.0};
  LossyIdler f2{{ctx.fc2.gamma, ctx.fc2.delta + j.dfc2, 0.0},
                ctx.gamma_fc_loss, 0.0, 0.0};
  BeamMaps m1 = idler_maps(f1, omega);
  BeamMaps m2 = idler_maps(f2, omega);

  const Eigen::Matrix2d rsec = rotation(j.sec);
  const Eigen::Matrix2d rsqz = rotation(j.sqz);
  const Eigen::Matrix2cd chain = rsec * b.t_in * m2.t_in * m1.t_in;

  Eigen::Matrix<cd, 2, base_col::dim> rows =
      Eigen::Matrix<cd, 2, base_col::dim>::Zero();
  rows.block<2, 2>(0, sqz) = chain * rsqz * se_i;
  rows.block<2, 2>(0, inj) = chain * si;
  rows.block<2, 2>(0, fc1) = rsec * b.t_in * m2.t_in * m1.t_arm;
  rows.block<2, 2>(0, fc2) = rsec * b.t_in * m2.t_arm;
  rows.block<2, 2>(0, arm_b) = rsec * b.t_arm;
  rows.block<2, 2>(0, sec_b) = rsec * b.t_sec;

  BaseAssembly out;
  out.b2 = se_r * (measured_quadrature(j.lo) * rows);
  out.b2(ro + 1) += sr;
  out.t_sig = se_r * (measured_quadrature(j.lo) * b.t_sig)(0, 0);
  return out;
}

Eigen::MatrixXd base_covariance(double r, double angle) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(base_col::dim, base_col::dim);
  s.block<2, 2>(base_col::sqz, base_col::sqz) = squeezed_block(r, angle);
  return s;
}

double row_power(const RowV& row, const Eigen::MatrixXd& s) {
  return (row * s * row.adjoint())(0, 0).real();
}

} // namespace

NoiseBudget qt_budget(const PlantParams& p, const QtSchemeParams& scheme,
                      const LossBudgetParams& losses,
                      const PhaseNoiseParams& noise, const FrequencyGrid& grid,
                      Exec exec) {
  p.validate();
  losses.validate();
  noise.validate();

  QtContext ctx;
  ctx.plant = p;
  ctx.plant.arm_rtl = losses.arm_rtl;
  ctx.plant.sec_loss = losses.sec_loss;
  ctx.carrier = carrier_effective_cavity(ctx.plant);
  ctx.carrier_loss = carrier_loss_rates(ctx.plant, losses, ctx.carrier);
  ctx.fc_a = lossy_idler_from_target(ctx.plant, scheme.gamma_a, scheme.delta_a);
  ctx.fc_v = lossy_idler_from_target(ctx.plant, scheme.gamma_v, scheme.delta_v);
  ctx.eta_inj = losses.injection;
  ctx.eta_ro = losses.readout;
  ctx.gh = ctx.plant.signal_gain();

  const double r = SqueezeParams::r_from_db(scheme.squeeze_db);
  const Eigen::MatrixXd s_full = qt_covariance(r, scheme.victor_angle);
  const Eigen::MatrixXd s_ref = qt_covariance(0.0, scheme.victor_angle);

  const double sig_sec = sec_angle_jitter(p, noise.sec_length_rms);
  const std::vector<std::pair<double, Jitter>> jitters = {
      {noise.lo_rms, Jitter{pi / 2.0, 0, 0, 0, 0}},
      {noise.squeezer_rms, Jitter{0, pi / 2.0, 0, 0, 0}},
      {sig_sec, Jitter{0, 0, pi / 2.0, 0, 0}},
  };
  for (const auto& [sig, jj] : jitters)
    if (sig >= 0.3)
      throw std::invalid_argument("qt_budget: phase-noise rms >= 0.3 rad");

  NoiseBudget nb{grid, {}, {}, {}, {}};
  const std::size_t nf = grid.size();
  nb.total.resize(nf);
  nb.reference.resize(nf);
  nb.sql = sql_curve(p, grid);
  for (const char* name : {"as_port", "injection", "arm_loss", "sec_loss",
                           "readout"})
    nb.components[name].resize(nf);

  auto body = [&](std::size_t i) {
    using namespace qt_col;
    const double om = grid.omega(i);
    const QtAssembly nom = qt_rows(ctx, om, Jitter{});

    // 2-channel Wiener gains from the lossy cross-spectra
    Eigen::Matrix2cd saa;
    saa << (nom.a1 * s_full * nom.a1.adjoint())(0, 0),
        (nom.a1 * s_full * nom.a2.adjoint())(0, 0),
        (nom.a2 * s_full * nom.a1.adjoint())(0, 0),
        (nom.a2 * s_full * nom.a2.adjoint())(0, 0);
    Eigen::Vector2cd sba;
    sba << (nom.b2 * s_full * nom.a1.adjoint())(0, 0),
        (nom.b2 * s_full * nom.a2.adjoint())(0, 0);
    // normal equations carry conj(S_aa), see wiener_gains
    const Eigen::Matrix2cd saa_c = saa.conjugate();
    const Eigen::Vector2cd g = saa_c.ldlt().solve(sba);

    const RowV tel = nom.b2 - g(0) * nom.a1 - g(1) * nom.a2;
    const double psd0 = row_power(tel, s_full);

    double delta = 0.0;
    for (const auto& [sig, jj] : jitters) {
      if (sig == 0.0) continue;
      const QtAssembly pj = qt_rows(ctx, om, jj);
      const RowV telj = pj.b2 - g(0) * pj.a1 - g(1) * pj.a2;
      delta += sig * sig * (row_power(telj, s_full) - psd0);
    }

    const double ts2 = std::norm(nom.t_sig);
    nb.total[i] = (psd0 + delta) / ts2;
    nb.components["as_port"][i] =
        (block_power(tel, s_full, victor, 2) +
         block_power(tel, s_full, alice, 4) + delta) /
        ts2;
    nb.components["injection"][i] = (block_power(tel, s_full, inj_v, 2) +
                                     block_power(tel, s_full, inj_a, 2) +
                                     block_power(tel, s_full, inj_b, 2)) /
                                    ts2;
    nb.components["arm_loss"][i] = (block_power(tel, s_full, arm_v, 2) +
                                    block_power(tel, s_full, arm_a, 2) +
                                    block_power(tel, s_full, arm_b, 2)) /
                                   ts2;
    nb.components["sec_loss"][i] = (block_power(tel, s_full, sec_v, 2) +
                                    block_power(tel, s_full, sec_a, 2) +
                                    block_power(tel, s_full, sec_b, 2)) /
                                   ts2;
    nb.components["readout"][i] = (block_power(tel, s_full, ro_b2, 2) +
                                   block_power(tel, s_full, ro_a1, 2) +
                                   block_power(tel, s_full, ro_a2, 2)) /
                                  ts2;

    // no-squeeze reference: same losses, squeezer off, no subtraction
    // (gains vanish with the correlations), no phase noise
    nb.reference[i] = row_power(nom.b2, s_ref) / ts2;
  };
  parallel_for(nf, exec, body);
  return nb;
}

NoiseBudget baseline_fds_budget(const PlantParams& p,
                                const BaselineSchemeParams& scheme,
                                const LossBudgetParams& losses,
                                const PhaseNoiseParams& noise,
                                const FrequencyGrid& grid, Exec exec) {
  p.validate();
  losses.validate();
  noise.validate();

  BaseContext ctx;
  ctx.plant = p;
  ctx.plant.arm_rtl = losses.arm_rtl;
  ctx.plant.sec_loss = losses.sec_loss;
  ctx.carrier = carrier_effective_cavity(ctx.plant);
  ctx.carrier_loss = carrier_loss_rates(ctx.plant, losses, ctx.carrier);
  ctx.fc1 = {scheme.gamma_1, scheme.delta_1, 0.0};
  ctx.fc2 = {scheme.gamma_2, scheme.delta_2, 0.0};
  ctx.gamma_fc_loss = c_light * losses.fc_rtl / (4.0 * losses.fc_length);
  ctx.eta_inj = losses.injection;
  ctx.eta_ro = losses.readout;
  ctx.gh = ctx.plant.signal_gain();

  const double r = SqueezeParams::r_from_db(scheme.squeeze_db);
  const Eigen::MatrixXd s_full = base_covariance(r, scheme.source_angle);
  const Eigen::MatrixXd s_ref = base_covariance(0.0, scheme.source_angle);

  const double sig_sec = sec_angle_jitter(p, noise.sec_length_rms);
  const std::vector<std::pair<double, Jitter>> angle_jitters = {
      {noise.lo_rms, Jitter{pi / 2.0, 0, 0, 0, 0}},
      {noise.squeezer_rms, Jitter{0, pi / 2.0, 0, 0, 0}},
      {sig_sec, Jitter{0, 0, pi / 2.0, 0, 0}},
  };
  for (const auto& [sig, jj] : angle_jitters)
    if (sig >= 0.3)
      throw std::invalid_argument("baseline_fds_budget: rms >= 0.3 rad");
  // filter length noise acts as cavity detuning jitter
  const double sig_dfc = p.omega0() * noise.fc_length_rms / losses.fc_length;

  NoiseBudget nb{grid, {}, {}, {}, {}};
  const std::size_t nf = grid.size();
  nb.total.resize(nf);
  nb.reference.resize(nf);
  nb.sql = sql_curve(p, grid);
  for (const char* name : {"as_port", "injection", "fc_loss", "arm_loss",
                           "sec_loss", "readout"})
    nb.components[name].resize(nf);

  auto body = [&](std::size_t i) {
    using namespace base_col;
    const double om = grid.omega(i);
    const BaseAssembly nom = base_rows(ctx, om, Jitter{});
    const double psd0 = row_power(nom.b2, s_full);

    double delta = 0.0;
    for (const auto& [sig, jj] : angle_jitters) {
      if (sig == 0.0) continue;
      const BaseAssembly pj = base_rows(ctx, om, jj);
      delta += sig * sig * (row_power(pj.b2, s_full) - psd0);
    }
    if (sig_dfc > 0.0) {
      for (int which = 0; which < 2; ++which) {
        Jitter jp, jm;
        (which == 0 ? jp.dfc1 : jp.dfc2) = sig_dfc;
        (which == 0 ? jm.dfc1 : jm.dfc2) = -sig_dfc;
        const double sp = row_power(base_rows(ctx, om, jp).b2, s_full);
        const double sm = row_power(base_rows(ctx, om, jm).b2, s_full);
        delta += 0.5 * (sp + sm - 2.0 * psd0);
      }
    }

    const double ts2 = std::norm(nom.t_sig);
    nb.total[i] = (psd0 + delta) / ts2;
    nb.components["as_port"][i] =
        (block_power(nom.b2, s_full, sqz, 2) + delta) / ts2;
    nb.components["injection"][i] = block_power(nom.b2, s_full, inj, 2) / ts2;
    nb.components["fc_loss"][i] = (block_power(nom.b2, s_full, fc1, 2) +
                                   block_power(nom.b2, s_full, fc2, 2)) /
                                  ts2;
    nb.components["arm_loss"][i] = block_power(nom.b2, s_full, arm_b, 2) / ts2;
    nb.components["sec_loss"][i] = block_power(nom.b2, s_full, sec_b, 2) / ts2;
    nb.components["readout"][i] = block_power(nom.b2, s_full, ro, 2) / ts2;
    nb.reference[i] = row_power(nom.b2, s_ref) / ts2;
  };
  parallel_for(nf, exec, body);
  return nb;
}

NoiseBudget no_squeeze_budget(const PlantParams& p,
                              const LossBudgetParams& losses,
                              const FrequencyGrid& grid, Exec exec) {
  QtSchemeParams scheme;
  scheme.squeeze_db = 0.0;
  // any reachable filter pair works: the squeezer is off
  scheme.gamma_a = 2.0 * pi * 4.27;
  scheme.delta_a = 2.0 * pi * 19.54;
  scheme.gamma_v = 2.0 * pi * 1.64;
  scheme.delta_v = 2.0 * pi * -7.62;
  PhaseNoiseParams off;
  off.squeezer_rms = off.lo_rms = 0.0;
  off.sec_length_rms = off.fc_length_rms = 0.0;
  NoiseBudget nb = qt_budget(p, scheme, losses, off, grid, exec);
  nb.total = nb.reference;
  return nb;
}

std::vector<double> strain_referral(const std::vector<double>& output_psd,
                                    const PlantParams& p,
                                    const LossBudgetParams& losses,
                                    const FrequencyGrid& grid) {
  if (output_psd.size() != grid.size())
    throw std::invalid_argument("strain_referral: size mismatch");
  const EffectiveCavity carrier = carrier_effective_cavity(p);
  const CarrierLoss cl = carrier_loss_rates(p, losses, carrier);
  const double gh = p.signal_gain();
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const BeamMaps b =
        carrier_maps(carrier, cl.gamma_arm, cl.gamma_sec, gh, grid.omega(i));
    const double ts2 = (1.0 - losses.readout) * std::norm(b.t_sig(1));
    out[i] = output_psd[i] / ts2;
  }
  return out;
}

std::vector<double> NoiseBudget::improvement_db() const {
  std::vector<double> out(total.size());
  for (std::size_t i = 0; i < total.size(); ++i)
    out[i] = 10.0 * std::log10(reference[i] / total[i]);
  return out;
}

} // namespace qtfds
