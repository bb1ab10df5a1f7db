// Times the per-frequency budget kernels and the integer search in serial vs
// OpenMP mode and prints a small table.

#include <chrono>
#include <cstdio>
#include <numbers>

#include "qtfds/budget.hpp"
#include "qtfds/config.hpp"
#include "qtfds/search.hpp"

using namespace qtfds;
using std::numbers::pi;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  using clock = std::chrono::steady_clock;
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    f();
    const auto t1 = clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

} // namespace

int main() {
  const RunConfig cfg = RunConfig::defaults();
  const FrequencyGrid grid = FrequencyGrid::log_spaced(1.0, 1000.0, 2000);

  QtSchemeParams qt;
  qt.gamma_a = cfg.targets.gamma1;
  qt.delta_a = cfg.targets.delta1;
  qt.gamma_v = cfg.targets.gamma2;
  qt.delta_v = cfg.targets.delta2;

  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial [ms]", "openmp [ms]",
              "speedup");

  const double t_qt_s = time_ms(
      [&] { qt_budget(cfg.plant, qt, cfg.losses, cfg.phase_noise, grid,
                      Exec::Serial); },
      3);
  const double t_qt_p = time_ms(
      [&] { qt_budget(cfg.plant, qt, cfg.losses, cfg.phase_noise, grid,
                      Exec::OpenMP); },
      3);
  std::printf("%-28s %12.2f %12.2f %8.2f\n", "qt_budget (2000 pts)", t_qt_s,
              t_qt_p, t_qt_s / t_qt_p);

  BaselineSchemeParams base;
  base.gamma_1 = cfg.targets.gamma1;
  base.delta_1 = cfg.targets.delta1;
  base.gamma_2 = cfg.targets.gamma2;
  base.delta_2 = cfg.targets.delta2;
  const double t_b_s = time_ms(
      [&] { baseline_fds_budget(cfg.plant, base, cfg.losses, cfg.phase_noise,
                                grid, Exec::Serial); },
      3);
  const double t_b_p = time_ms(
      [&] { baseline_fds_budget(cfg.plant, base, cfg.losses, cfg.phase_noise,
                                grid, Exec::OpenMP); },
      3);
  std::printf("%-28s %12.2f %12.2f %8.2f\n", "baseline_budget (2000 pts)",
              t_b_s, t_b_p, t_b_s / t_b_p);

  SearchRanges ranges = cfg.ranges;
  ranges.p_min = -20000;
  ranges.p_max = 20000;
  const double t_s_s = time_ms(
      [&] { search_lengths(cfg.plant, cfg.targets, ranges, Exec::Serial); }, 1);
  const double t_s_p = time_ms(
      [&] { search_lengths(cfg.plant, cfg.targets, ranges, Exec::OpenMP); }, 1);
  std::printf("%-28s %12.2f %12.2f %8.2f\n", "search_lengths (40k p-range)",
              t_s_s, t_s_p, t_s_s / t_s_p);
  return 0;
}
