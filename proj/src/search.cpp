#include "qtfds/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qtfds/constants.hpp"

namespace qtfds {

using std::numbers::pi;
using namespace constants;

void SearchTargets::validate() const {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw std::invalid_argument("SearchTargets: gammas must be > 0");
  if (!(band_fmin_hz > 0.0) || !(band_fmax_hz > band_fmin_hz))
    throw std::invalid_argument("SearchTargets: bad band");
}

double solve_detuning(const PlantParams& p, double gamma_target,
                      std::int64_t n) {
  if (!(gamma_target > 0.0))
    throw std::invalid_argument("solve_detuning: gamma_target must be > 0");
  const double rsem = 1.0 - p.T_sem;
  const double x = (p.T_sem * p.gamma_1arm() / gamma_target - 1.0 - rsem) /
                   (2.0 * std::sqrt(rsem));
  if (x < -1.0 || x > 1.0)
    throw UnreachableBandwidth(
        "solve_detuning: target bandwidth unreachable (arccos argument " +
        std::to_string(x) + " outside [-1, 1])");
  return (c_light / (2.0 * p.L_sec)) *
         (std::acos(x) + (2.0 * double(n) - 1.0) * pi + p.phi0);
}

double angle_error(const EffectiveCavity& carrier, const EffectiveCavity& fc_a,
                   const EffectiveCavity& fc_v, double omega) {
  const double thb = plant_angles(carrier, omega).theta;
  const double tha = idler_rotation(fc_a, omega).first;
  const double thv = idler_rotation(fc_v, omega).first;
  return std::remainder(thb + tha + thv + pi / 2.0, pi);
}

std::vector<double> angle_error_curve(const EffectiveCavity& carrier,
                                      const EffectiveCavity& fc_a,
                                      const EffectiveCavity& fc_v,
                                      const FrequencyGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = angle_error(carrier, fc_a, fc_v, grid.omega(i));
  return out;
}

namespace {

struct Candidate {
  double err = 0.0;
  std::int64_t q = 0, p = 0, n_a = 0, n_v = 0;
  bool operator<(const Candidate& o) const {
    return std::tie(err, q, p, n_a, n_v) <
           std::tie(o.err, o.q, o.p, o.n_a, o.n_v);
  }
};

PlantParams tuned(const PlantParams& nominal, std::int64_t q, std::int64_t p) {
  PlantParams t = nominal;
  t.L_arm += double(q) * nominal.wavelength;
  t.L_sec += double(p) * nominal.wavelength;
  return t;
}

struct Eval {
  double delta_a = 0.0, delta_v = 0.0;
  EffectiveCavity a, v;
  double err = 0.0;  // max relative detuning error
};

std::optional<Eval> evaluate(const PlantParams& nominal,
                             const SearchTargets& t, const SearchRanges& r,
                             std::int64_t q, std::int64_t p, std::int64_t n_a,
                             std::int64_t n_v) {
  const PlantParams pp = tuned(nominal, q, p);
  Eval e;
  try {
    e.delta_a = solve_detuning(pp, t.gamma1, n_a);
    e.delta_v = solve_detuning(pp, t.gamma2, n_v);
  } catch (const UnreachableBandwidth&) {
    return std::nullopt;
  }
  const double fa = e.delta_a / (2.0 * pi), fv = e.delta_v / (2.0 * pi);
  if (fa < r.delta_a_min_hz || fa > r.delta_a_max_hz || fv < r.delta_v_min_hz ||
      fv > r.delta_v_max_hz)
    return std::nullopt;
  e.a = idler_response(pp, e.delta_a);
  e.v = idler_response(pp, e.delta_v);
  e.err = std::max(std::abs(e.a.delta - t.delta1) / std::abs(t.delta1),
                   std::abs(e.v.delta - t.delta2) / std::abs(t.delta2));
  return e;
}

/// SEC branch integers whose detunings land inside [fmin, fmax] (Hz).
std::pair<std::int64_t, std::int64_t> branch_window(const PlantParams& p,
                                                    double gamma_target,
                                                    double fmin, double fmax) {
  // invert Delta(n), using the branch-0 offset
  const double d0 = solve_detuning(p, gamma_target, 0);
  const double step = pi * c_light / p.L_sec;  // exact Delta(n+1) - Delta(n)
  const auto lo = static_cast<std::int64_t>(
      std::ceil((2.0 * pi * fmin - d0) / step));
  const auto hi = static_cast<std::int64_t>(
      std::floor((2.0 * pi * fmax - d0) / step));
  return {lo, hi};
}

} // namespace

bool candidate_feasible(const PlantParams& nominal, const SearchTargets& t,
                        const SearchRanges& r, std::int64_t q, std::int64_t p,
                        std::int64_t n_a, std::int64_t n_v) {
  if (q < r.q_min || q > r.q_max || p < r.p_min || p > r.p_max) return false;
  if (n_a < r.n_min || n_a > r.n_max || n_v < r.n_min || n_v > r.n_max)
    return false;
  return evaluate(nominal, t, r, q, p, n_a, n_v).has_value();
}

SearchResult search_lengths(const PlantParams& nominal, const SearchTargets& t,
                            const SearchRanges& r, Exec exec) {
  t.validate();
  nominal.validate();

  auto [na_lo, na_hi] =
      branch_window(nominal, t.gamma1, r.delta_a_min_hz, r.delta_a_max_hz);
  auto [nv_lo, nv_hi] =
      branch_window(nominal, t.gamma2, r.delta_v_min_hz, r.delta_v_max_hz);
  na_lo = std::max(na_lo, r.n_min);
  na_hi = std::min(na_hi, r.n_max);
  nv_lo = std::max(nv_lo, r.n_min);
  nv_hi = std::min(nv_hi, r.n_max);
  if (na_lo > na_hi || nv_lo > nv_hi)
    throw std::runtime_error(
        "search_lengths: no SEC branch integer reaches the detuning window");

  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (std::int64_t na = na_lo; na <= na_hi; ++na)
    for (std::int64_t nv = nv_lo; nv <= nv_hi; ++nv) pairs.emplace_back(na, nv);

  const std::size_t np = static_cast<std::size_t>(r.p_max - r.p_min + 1);
  const std::size_t total = pairs.size() * np;
  constexpr std::size_t top_k = 64;

  // stage 1: detuning-error scan; q chosen per (n_a, n_v, p) by weighted
  // least squares along the shared shift direction
  std::vector<std::vector<Candidate>> per_thread(1);
#ifdef _OPENMP
  per_thread.resize(static_cast<std::size_t>(std::max(1, omp_get_max_threads())));
#endif
  auto body = [&](std::size_t idx) {
    const auto [na, nv] = pairs[idx / np];
    const std::int64_t p = r.p_min + static_cast<std::int64_t>(idx % np);
    auto base = evaluate(nominal, t, r, 0, p, na, nv);
    if (!base) return;
    const double sa = base->delta_a * nominal.wavelength / nominal.L_arm;
    const double sv = base->delta_v * nominal.wavelength / nominal.L_arm;
    const double wa = 1.0 / std::abs(t.delta1), wv = 1.0 / std::abs(t.delta2);
    const double ra = t.delta1 - base->a.delta, rv = t.delta2 - base->v.delta;
    const double qc = (wa * wa * sa * ra + wv * wv * sv * rv) /
                      (wa * wa * sa * sa + wv * wv * sv * sv);
    if (std::abs(qc) > double(std::max(std::abs(r.q_min), std::abs(r.q_max))) * 2)
      return;
    std::size_t tid = 0;
#ifdef _OPENMP
    tid = static_cast<std::size_t>(omp_get_thread_num());
#endif
    auto& local = per_thread[tid];
    for (std::int64_t dq = -1; dq <= 1; ++dq) {
      const auto q = static_cast<std::int64_t>(std::llround(qc)) + dq;
      if (q < r.q_min || q > r.q_max) continue;
      auto e = evaluate(nominal, t, r, q, p, na, nv);
      if (!e) continue;
      Candidate cand{e->err, q, p, na, nv};
      if (local.size() == top_k && local.front() < cand) continue;
      local.push_back(cand);
      std::push_heap(local.begin(), local.end());
      if (local.size() > top_k) {
        std::pop_heap(local.begin(), local.end());
        local.pop_back();
      }
    }
  };
#ifdef _OPENMP
#pragma omp parallel if (exec == Exec::OpenMP)
  {
#pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(total); ++i)
      body(static_cast<std::size_t>(i));
  }
#else
  (void)exec;
  for (std::size_t i = 0; i < total; ++i) body(i);
#endif

  std::vector<Candidate> pool;
  for (auto& v : per_thread) pool.insert(pool.end(), v.begin(), v.end());
  if (pool.empty())
    throw std::runtime_error(
        "search_lengths: no feasible candidate within the integer ranges");
  std::sort(pool.begin(), pool.end());
  if (pool.size() > top_k) pool.resize(top_k);

  // stage 2: in-band angle residual on the short list
  const FrequencyGrid band =
      FrequencyGrid::log_spaced(t.band_fmin_hz, t.band_fmax_hz, 200);
  const Candidate* best = nullptr;
  double best_score = 0.0;
  std::vector<Eval> evals(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& cand = pool[i];
    evals[i] = *evaluate(nominal, t, r, cand.q, cand.p, cand.n_a, cand.n_v);
    const PlantParams pp = tuned(nominal, cand.q, cand.p);
    const EffectiveCavity carrier = carrier_effective_cavity(pp);
    double score = 0.0;
    for (std::size_t j = 0; j < band.size(); ++j)
      score = std::max(score, std::abs(angle_error(carrier, evals[i].a,
                                                   evals[i].v, band.omega(j))));
    if (!best || score < best_score) {
      best = &cand;
      best_score = score;
    }
  }

  const std::size_t bi = static_cast<std::size_t>(best - pool.data());
  const Eval& e = evals[bi];
  SearchResult res;
  res.delta_a = e.delta_a;
  res.delta_v = e.delta_v;
  res.n_a = best->n_a;
  res.n_v = best->n_v;
  res.q = best->q;
  res.p = best->p;
  const PlantParams pp = tuned(nominal, best->q, best->p);
  res.arm_length = pp.L_arm;
  res.sec_length = pp.L_sec;
  res.achieved_a = e.a;
  res.achieved_v = e.v;
  res.max_angle_error = best_score;
  const EffectiveCavity carrier = carrier_effective_cavity(pp);
  res.angle_error_hz.resize(band.size());
  res.angle_error_rad = angle_error_curve(carrier, e.a, e.v, band);
  for (std::size_t j = 0; j < band.size(); ++j)
    res.angle_error_hz[j] = band.hz(j);
  return res;
}

namespace {

/// Deterministic Nelder-Mead on R^n.
template <typename F>
std::pair<std::vector<double>, double> nelder_mead(
    F&& f, std::vector<double> x0, double scale, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    xs[i + 1][i] += scale * (x0[i] != 0.0 ? std::abs(x0[i]) : 1.0);
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2(n + 1);
    std::vector<double> fs2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs2[i] = xs[idx[i]];
      fs2[i] = fs[idx[i]];
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::abs(fs[n] - fs[0]) < 1e-14 * (1.0 + std::abs(fs[0]))) break;
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j] / double(n);
    auto blend = [&](double alpha) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j)
        x[j] = centroid[j] + alpha * (xs[n][j] - centroid[j]);
      return x;
    };
    auto xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      auto xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      auto xc = blend(fr < fs[n] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[n])) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  order();
  return {xs[0], fs[0]};
}

} // namespace

SearchTargets target_filters_from_plant(const EffectiveCavity& carrier,
                                        const SearchTargets& seed,
                                        double* residual) {
  if (carrier.delta == 0.0)
    throw std::invalid_argument("target_filters_from_plant: plant not detuned");
  seed.validate();
  const FrequencyGrid band =
      FrequencyGrid::log_spaced(seed.band_fmin_hz, seed.band_fmax_hz, 200);
  std::vector<double> thb(band.size());
  for (std::size_t i = 0; i < band.size(); ++i)
    thb[i] = plant_angles(carrier, band.omega(i)).theta;

  auto objective = [&](const std::vector<double>& x) {
    const double g1 = x[0], d1 = x[1], g2 = x[2], d2 = x[3];
    if (g1 <= 0.0 || g2 <= 0.0) return 1e9;
    double worst = 0.0;
    for (std::size_t i = 0; i < band.size(); ++i) {
      const double om = band.omega(i), om2 = om * om;
      const double t1 = std::atan2(2.0 * d1 * g1, om2 + g1 * g1 - d1 * d1);
      const double t2 = std::atan2(2.0 * d2 * g2, om2 + g2 * g2 - d2 * d2);
      const double e = std::remainder(thb[i] + t1 + t2 + pi / 2.0, pi);
      worst = std::max(worst, std::abs(e));
    }
    return worst;
  };

  // deterministic multi-start: the seed as given plus detuning-shrunk
  // variants, which reach the near-tuned degenerate regime
  std::vector<std::vector<double>> starts;
  for (double shrink : {1.0, 0.3, 0.03, 1e-3})
    starts.push_back({seed.gamma1, seed.delta1 * shrink, seed.gamma2,
                      seed.delta2 * shrink});
  starts.push_back({carrier.gamma, std::abs(carrier.delta), carrier.gamma / 2,
                    -std::abs(carrier.delta) / 3});
  std::vector<double> xbest;
  double fbest = 1e300;
  for (const auto& x0 : starts) {
    auto [x1, f1] = nelder_mead(objective, x0, 0.05, 3000);
    // one restart from the found point breaks simplex degeneracies
    auto [x2, f2] = nelder_mead(objective, x1, 0.01, 3000);
    if (f2 > f1) {
      x2 = x1;
      f2 = f1;
    }
    if (f2 < fbest) {
      xbest = x2;
      fbest = f2;
    }
  }
  if (residual) *residual = fbest;
  SearchTargets out = seed;
  out.gamma1 = xbest[0];
  out.delta1 = xbest[1];
  out.gamma2 = xbest[2];
  out.delta2 = xbest[3];
  if (fbest > seed.angle_tolerance)
    throw std::runtime_error(
        "target_filters_from_plant: optimizer residual " +
        std::to_string(fbest) + " rad exceeds tolerance");
  return out;
}

} // namespace qtfds
