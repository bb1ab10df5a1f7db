// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Optionally takes the design-point config as argv[1].

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "pipeline_helpers.hpp"
#include "qtfds/astro.hpp"
#include "qtfds/budget.hpp"
#include "qtfds/config.hpp"
#include "qtfds/search.hpp"

using namespace qtfds;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

// --------------------------------------------------------------------------
// 1. lossless residual law and net improvement
// --------------------------------------------------------------------------
void criterion_1(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const FrequencyGrid grid = FrequencyGrid::log_spaced(1.0, 1000.0, 400);
  double worst = 0.0;
  const double r15 = SqueezeParams::r_from_db(15.0);
  for (double r : {0.5, 1.0, r15}) {
    const auto run = testing::run_lossless_pipeline(cfg.plant, r, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(run.residual[i] / run.eq9[i] - 1.0));
  }
  const auto ref = testing::run_lossless_pipeline(cfg.plant, 0.0, grid);
  const auto qt = testing::run_lossless_pipeline(cfg.plant, r15, grid);
  const double improvement =
      10.0 * std::log10(ref.residual[200] / qt.residual[200]);
  const double ch = std::cosh(2 * r15), em = std::exp(-2 * r15);
  const double predicted = -10.0 * std::log10((1.0 + em * ch) / (em + ch));
  const double asymptotic = 15.0 - 10.0 * std::log10(3.0);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  const bool pass = worst <= 1e-8 &&
                    std::abs(improvement - predicted) <= 0.01 && secs < 5.0;
  report(1, pass,
         fmt("lossless residual vs closed form: max rel err %.2e (<=1e-8); "
             "15 dB net improvement %.4f dB vs %.4f predicted "
             "(asymptotic 15-10log10(3) = %.4f); runtime %.2f s (<5)",
             worst, improvement, predicted, asymptotic, secs));
}

// --------------------------------------------------------------------------
// 2. wiener optimality oracle
// --------------------------------------------------------------------------
// the true residual is quadratic with kernel conj(S_aa); callers pass the
// conjugated matrix
double quadratic_residual(const Eigen::MatrixXcd& s, const Eigen::VectorXcd& b,
                          double sbb, const Eigen::VectorXcd& g) {
  return sbb + (g.adjoint() * s * g)(0, 0).real() -
         2.0 * (g.adjoint() * b)(0, 0).real();
}

// conjugate-gradient minimization of the residual quadratic; touches only
// evaluations of the gradient, independent of the linear-solve path
double cg_minimum(const Eigen::MatrixXcd& s, const Eigen::VectorXcd& b,
                  double sbb) {
  const Eigen::Index n = s.rows();
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd res = b - s * g;  // -(gradient)/2
  Eigen::VectorXcd dir = res;
  double rs = res.squaredNorm();
  for (int it = 0; it < 16 * n && rs > 1e-30; ++it) {
    const Eigen::VectorXcd sd = s * dir;
    const double denom = (dir.adjoint() * sd)(0, 0).real();
    if (denom <= 0.0) break;
    const double alpha = rs / denom;
    g += alpha * dir;
    res -= alpha * sd;
    const double rs_new = res.squaredNorm();
    dir = res + (rs_new / rs) * dir;
    rs = rs_new;
  }
  return quadratic_residual(s, b, sbb, g);
}

void criterion_2(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> n01;
  double worst_gap = 0.0, worst_closed = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 2 + rep % 3;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cd(n01(rng), n01(rng));
    const Eigen::MatrixXcd saa =
        a * a.adjoint() + 0.05 * Eigen::MatrixXcd::Identity(n, n);
    Eigen::VectorXcd sba(n);
    for (int i = 0; i < n; ++i) sba(i) = cd(n01(rng), n01(rng));
    const Eigen::MatrixXcd saa_c = saa.conjugate();
    const double bound =
        (sba.adjoint() * saa_c.ldlt().solve(sba))(0, 0).real();
    const double sbb = bound + std::abs(n01(rng)) + 0.1;

    CrossSpectra cs;
    cs.s_aa = {saa};
    cs.s_ba = {sba};
    cs.s_bb = {sbb};
    const FilterGains g = wiener_gains(cs);
    const double res_solver = residual_spectrum(cs, g)[0];
    const double res_cg = cg_minimum(saa.conjugate(), sba, sbb);
    worst_gap = std::max(worst_gap, res_solver - res_cg);

    if (n == 2) {
      const cd det = saa(0, 0) * saa(1, 1) - std::norm(saa(0, 1));
      const cd g1 = (sba(0) * saa(1, 1) - saa(1, 0) * sba(1)) / det;
      const cd g2 = (sba(1) * saa(0, 0) - saa(0, 1) * sba(0)) / det;
      worst_closed = std::max({worst_closed, std::abs(g.g[0](0) - g1),
                               std::abs(g.g[0](1) - g2)});
    }
  }
  const bool pass = worst_gap <= 1e-8 && worst_closed <= 1e-12;
  report(2, pass,
         fmt("1000 random instances (N in {2,3,4}): solver beats/ties CG "
             "within %.2e (<=1e-8); N=2 closed forms match to %.2e (<=1e-12)",
             worst_gap, worst_closed));
}

// --------------------------------------------------------------------------
// 3. Table III regression
// --------------------------------------------------------------------------
void criterion_3(const RunConfig& cfg) {
  const double g1arm_hz = cfg.plant.gamma_1arm() / (2 * pi);
  const bool ok_g1 = std::abs(g1arm_hz - 8.35) <= 0.01;

  const SearchResult res = search_lengths(cfg.plant, cfg.targets, cfg.ranges);
  const double e_ga =
      std::abs(res.achieved_a.gamma - 2 * pi * 4.27) / (2 * pi * 4.27);
  const double e_da =
      std::abs(res.achieved_a.delta - 2 * pi * 19.54) / (2 * pi * 19.54);
  const double e_gv =
      std::abs(res.achieved_v.gamma - 2 * pi * 1.64) / (2 * pi * 1.64);
  const double e_dv =
      std::abs(res.achieved_v.delta + 2 * pi * 7.62) / (2 * pi * 7.62);
  const double fa = res.delta_a / (2 * pi) / 1e6;
  const double fv = res.delta_v / (2 * pi) / 1e6;
  const bool ok_delta = fa >= 319.0 * 0.99 && fa <= 320.0 * 1.01 &&
                        std::abs(fv - 962.0) <= 9.62;
  const bool ok_filters =
      e_ga <= 0.01 && e_da <= 0.01 && e_gv <= 0.01 && e_dv <= 0.01;
  const bool ok_published = candidate_feasible(cfg.plant, cfg.targets,
                                               cfg.ranges, 30000, 14030, 213,
                                               642);
  const bool pass = ok_g1 && ok_filters && ok_delta && ok_published;
  report(3, pass,
         fmt("gamma_1arm %.4f Hz (8.35+-0.01); search (q=%lld, p=%lld, "
             "n_a=%lld, n_v=%lld) achieves (%.3f, %.3f) and (%.3f, %.3f) Hz "
             "(errors %.2f%%, %.2f%%, %.2f%%, %.2f%%, all <=1%%); "
             "Delta_a %.2f MHz, Delta_v %.2f MHz; published integers "
             "(30000, 14030, 213, 642) feasible: %s",
             g1arm_hz, (long long)res.q, (long long)res.p, (long long)res.n_a,
             (long long)res.n_v, res.achieved_a.gamma / (2 * pi),
             res.achieved_a.delta / (2 * pi), res.achieved_v.gamma / (2 * pi),
             res.achieved_v.delta / (2 * pi), 100 * e_ga, 100 * e_da,
             100 * e_gv, 100 * e_dv, fa, fv, ok_published ? "yes" : "no"));
}

// --------------------------------------------------------------------------
// 4. Appendix E effective losses
// --------------------------------------------------------------------------
void criterion_4(const RunConfig& cfg) {
  PlantParams tuned = cfg.plant;
  tuned.L_arm += 30000 * tuned.wavelength;
  tuned.L_sec += 14030 * tuned.wavelength;
  const double da = solve_detuning(tuned, cfg.targets.gamma1, 213);
  const double dv = solve_detuning(tuned, cfg.targets.gamma2, 642);
  const double a_a = lossy_idler_response(tuned, da).a_eff * 1e6;
  const double a_v = lossy_idler_response(tuned, dv).a_eff * 1e6;
  const bool ok_vals = std::abs(a_v - 52.0) <= 2.0 && std::abs(a_a - 63.0) <= 2.0;
  const double per_km_fc = 20.0 / 1.0;
  const bool ok_ineq = (a_v / (tuned.L_arm / 1000.0)) < per_km_fc &&
                       (a_a / (tuned.L_arm / 1000.0)) < per_km_fc;
  report(4, ok_vals && ok_ineq,
         fmt("A_eff: victor %.2f ppm (52+-2), alice %.2f ppm (63+-2); "
             "per-unit-length %.3f and %.3f ppm/km < 20 ppm/km",
             a_v, a_a, a_v / (tuned.L_arm / 1000.0),
             a_a / (tuned.L_arm / 1000.0)));
}

// --------------------------------------------------------------------------
// 5. phase-noise averaging vs Monte-Carlo
// --------------------------------------------------------------------------
void criterion_5(const RunConfig& cfg) {
  const double r = SqueezeParams::r_from_db(15.0);
  const double sigma = 10e-3;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> jitter(0.0, sigma);
  double acc_sq = 0.0, acc_anti = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Eigen::Matrix2d s = squeezed_block(r, jitter(rng));
    acc_sq += s(0, 0);
    acc_anti += s(1, 1);
  }
  const double mc_sq = acc_sq / n, mc_anti = acc_anti / n;
  auto sq = [&](double chi) { return squeezed_block(r, chi)(0, 0); };
  auto anti = [&](double chi) { return squeezed_block(r, chi)(1, 1); };
  const double avg_sq = phase_noise_average(sq, 0.0, sigma);
  const double avg_anti = phase_noise_average(anti, 0.0, sigma);
  const double err_sq = std::abs(avg_sq / mc_sq - 1.0);
  const double err_anti = std::abs(avg_anti / mc_anti - 1.0);
  report(5, err_sq <= 0.01 && err_anti <= 0.01,
         fmt("second-order vs 1e5-sample MC at 10 mrad: squeezed %.5f vs "
             "%.5f (%.3f%%), anti-squeezed %.3f vs %.3f (%.3f%%), both <=1%%",
             avg_sq, mc_sq, 100 * err_sq, avg_anti, mc_anti, 100 * err_anti));
}

// --------------------------------------------------------------------------
// 6. Fig.-3 qualitative properties
// --------------------------------------------------------------------------
struct Fig3Curves {
  FrequencyGrid grid;
  NoiseBudget qt15, base10, base15;
  std::size_t dip_index;
};

Fig3Curves make_fig3(const RunConfig& cfg) {
  FrequencyGrid grid = cfg.make_grid();
  const EffectiveCavity carrier = carrier_effective_cavity(cfg.plant);
  SearchTargets filters = cfg.targets;
  if (cfg.filter_mode == FilterMode::Fit)
    filters = target_filters_from_plant(carrier, cfg.targets);

  QtSchemeParams qt;
  qt.squeeze_db = 15.0;
  qt.victor_angle = cfg.victor_angle;
  qt.gamma_a = filters.gamma1;
  qt.delta_a = filters.delta1;
  qt.gamma_v = filters.gamma2;
  qt.delta_v = filters.delta2;
  NoiseBudget qt15 = qt_budget(cfg.plant, qt, cfg.losses, cfg.phase_noise, grid);

  BaselineSchemeParams base;
  base.source_angle = cfg.victor_angle;
  base.gamma_1 = filters.gamma1;
  base.delta_1 = filters.delta1;
  base.gamma_2 = filters.gamma2;
  base.delta_2 = filters.delta2;
  base.squeeze_db = 10.0;
  NoiseBudget base10 =
      baseline_fds_budget(cfg.plant, base, cfg.losses, cfg.phase_noise, grid);
  base.squeeze_db = 15.0;
  NoiseBudget base15 =
      baseline_fds_budget(cfg.plant, base, cfg.losses, cfg.phase_noise, grid);

  std::size_t dip = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (qt15.reference[i] < qt15.reference[dip]) dip = i;
  return Fig3Curves{std::move(grid), std::move(qt15), std::move(base10),
                    std::move(base15), dip};
}

void criterion_6(const Fig3Curves& c) {
  const double f_dip = c.grid.hz(c.dip_index);
  const bool ok_a = f_dip < 10.0 && f_dip > 2.0;

  const auto e10 = c.base10.improvement_db();
  const auto e15 = c.base15.improvement_db();
  const bool ok_b = e15[c.dip_index] < e10[c.dip_index];

  const auto eqt = c.qt15.improvement_db();
  double min_broad = 1e300, min_mid = 1e300, max_mid = -1e300;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    const double f = c.grid.hz(i);
    if (f >= 10.0 && f <= 100.0) min_broad = std::min(min_broad, eqt[i]);
    if (f >= 30.0 && f <= 100.0) {
      min_mid = std::min(min_mid, eqt[i]);
      max_mid = std::max(max_mid, eqt[i]);
    }
  }
  const bool ok_c = min_broad >= 4.0;
  const bool ok_d = min_mid >= 4.0 && max_mid <= 6.0;
  report(6, ok_a && ok_b && ok_c && ok_d,
         fmt("(a) no-squeeze spring dip at %.2f Hz (<10); (b) baseline "
             "-15 dB %.2f dB < -10 dB %.2f dB at the dip; (c) QT -15 dB "
             "improvement >= %.2f dB over 10-100 Hz (>=4); (d) mid-band "
             "30-100 Hz within [%.2f, %.2f] dB (in [4,6])",
             f_dip, e15[c.dip_index], e10[c.dip_index], min_broad, min_mid,
             max_mid));
}

// --------------------------------------------------------------------------
// 7. invariant suites
// --------------------------------------------------------------------------
void criterion_7(const RunConfig& cfg, const Fig3Curves& c) {
  std::string detail;
  bool pass = true;

  // all-pass idlers and vacuum rotation invariance
  {
    LossyIdler li;
    li.cav = {cfg.targets.gamma1, cfg.targets.delta1, 0.0};
    double worst = 0.0;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const auto m = idler_maps(li, c.grid.omega(i));
      worst = std::max(worst, (m.t_in * m.t_in.adjoint() -
                               Eigen::Matrix2cd::Identity())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    Eigen::Matrix2d acc = Eigen::Matrix2d::Identity();
    for (double th : {0.3, 1.1, -2.2, 0.9})
      acc = rotation(th) * acc * rotation(th).transpose();
    worst = std::max(worst,
                     (acc - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    pass = pass && worst < 1e-10;
    detail += fmt("all-pass/rotation invariance %.1e; ", worst);
  }

  // PSD positivity of the propagated budget spectra
  {
    double min_psd = 1e300;
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      min_psd = std::min({min_psd, c.qt15.total[i], c.base10.total[i],
                          c.base15.total[i]});
    pass = pass && min_psd > 0.0;
    detail += fmt("min budget PSD %.2e > 0; ", min_psd);
  }

  // budget additivity
  {
    double worst = 0.0;
    for (const NoiseBudget* nb : {&c.qt15, &c.base10}) {
      for (std::size_t i = 0; i < c.grid.size(); ++i) {
        double s = 0.0;
        for (const auto& [name, comp] : nb->components) s += comp[i];
        worst = std::max(worst, std::abs(s / nb->total[i] - 1.0));
      }
    }
    pass = pass && worst <= 1e-9;
    detail += fmt("additivity %.1e; ", worst);
  }

  // horizon ordering and monotonicity over a synthetic classical floor
  {
    AsdTable floor;
    floor.label = "classical floor";
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const double f = c.grid.hz(i);
      floor.freq_hz.push_back(f);
      floor.asd.push_back(6e-25 * std::sqrt(1.0 + std::pow(3.0 / f, 16)));
    }
    auto total_asd = [&](const NoiseBudget& nb) {
      AsdTable t;
      t.label = "quantum";
      for (std::size_t i = 0; i < c.grid.size(); ++i) {
        t.freq_hz.push_back(c.grid.hz(i));
        t.asd.push_back(std::sqrt(nb.total[i]));
      }
      return combine_asd({t, floor}, c.grid);
    };
    const AsdTable qt = total_asd(c.qt15);
    const AsdTable b10 = total_asd(c.base10);
    std::vector<double> masses;
    for (int i = 0; i < 25; ++i)
      masses.push_back(2.0 * std::pow(1500.0, i / 24.0));
    const HorizonCurve hq = horizon_curve(qt, masses, 8.0, cfg.horizon.cosmo);
    const HorizonCurve hb = horizon_curve(b10, masses, 8.0, cfg.horizon.cosmo);
    std::size_t imax = 0;
    for (std::size_t i = 1; i < masses.size(); ++i)
      if (hq.distance_mpc[i] > hq.distance_mpc[imax]) imax = i;
    const bool ok_peak = hq.distance_mpc[imax] >= hb.distance_mpc[imax];
    bool ok_low = false;
    for (std::size_t i = 0; i < masses.size(); ++i)
      if (masses[i] <= 20.0 && hb.distance_mpc[i] >= hq.distance_mpc[i])
        ok_low = true;
    // monotonicity: scaling the ASD up shrinks every horizon
    AsdTable louder = qt;
    for (double& a : louder.asd) a *= 1.3;
    const HorizonCurve hl = horizon_curve(louder, masses, 8.0,
                                          cfg.horizon.cosmo);
    bool ok_mono = true;
    for (std::size_t i = 0; i < masses.size(); ++i)
      ok_mono = ok_mono && hl.distance_mpc[i] <= hq.distance_mpc[i] + 1e-9;
    pass = pass && ok_peak && ok_low && ok_mono;
    detail += fmt(
        "horizon: QT %.0f Mpc vs baseline %.0f Mpc at the %.0f Msun peak "
        "(QT >= baseline %s), baseline ahead below 20 Msun %s, monotone %s",
        hq.distance_mpc[imax], hb.distance_mpc[imax], masses[imax],
        ok_peak ? "yes" : "NO", ok_low ? "yes" : "NO", ok_mono ? "yes" : "NO");
  }

  report(7, pass, detail);
}

} // namespace

int main(int argc, char** argv) {
  RunConfig cfg = RunConfig::defaults();
  if (argc > 1) cfg = RunConfig::from_file(argv[1]);

  criterion_1(cfg);
  criterion_2(cfg);
  criterion_3(cfg);
  criterion_4(cfg);
  criterion_5(cfg);
  const Fig3Curves fig3 = make_fig3(cfg);
  criterion_6(fig3);
  criterion_7(cfg, fig3);

  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
