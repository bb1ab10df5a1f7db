// Batch front-end: parse a config, run the pipelines, emit CSV tables and
// optional SVG plots.
//
// Exit codes: 0 success, 2 config error, 3 infeasible search, 4 numerical
// failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "qtfds/budget.hpp"
#include "qtfds/config.hpp"
#include "qtfds/io.hpp"
#include "qtfds/search.hpp"

using namespace qtfds;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string schemes;
  std::string out_dir;
  std::string grid;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "config file (key=value sections)");
  cmd->add_option("--scheme", flags.schemes, "comma list: qt,baseline-fds,no-squeeze");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--grid", flags.grid, "fmin_hz,fmax_hz,points");
  cmd->add_option("--seed", flags.seed, "RNG seed (Monte-Carlo cross-checks only)");
}

RunConfig load_config(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty() ? RunConfig::defaults()
                                            : RunConfig::from_file(flags.config_path);
  if (!flags.schemes.empty()) {
    cfg.schemes.clear();
    std::istringstream in(flags.schemes);
    std::string item;
    while (std::getline(in, item, ','))
      if (!item.empty()) cfg.schemes.push_back(item);
  }
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (!flags.grid.empty()) {
    double fmin, fmax;
    unsigned long n;
    if (std::sscanf(flags.grid.c_str(), "%lf,%lf,%lu", &fmin, &fmax, &n) != 3)
      throw ConfigError("--grid expects fmin,fmax,n");
    cfg.grid = {fmin, fmax, n};
  }
  if (flags.seed >= 0) cfg.seed = static_cast<unsigned long long>(flags.seed);
  cfg.validate();
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

SearchTargets resolve_filters(const RunConfig& cfg) {
  if (cfg.filter_mode == FilterMode::Table) return cfg.targets;
  const EffectiveCavity carrier = carrier_effective_cavity(cfg.plant);
  double residual = 0.0;
  SearchTargets fitted =
      target_filters_from_plant(carrier, cfg.targets, &residual);
  std::cerr << "filters: fitted ("
            << fitted.gamma1 / (2 * pi) << ", " << fitted.delta1 / (2 * pi)
            << ") Hz and (" << fitted.gamma2 / (2 * pi) << ", "
            << fitted.delta2 / (2 * pi) << ") Hz, in-band angle residual "
            << residual << " rad\n";
  return fitted;
}

NoiseBudget run_scheme(const RunConfig& cfg, const SearchTargets& filters,
                       const std::string& scheme, const FrequencyGrid& grid) {
  if (scheme == "qt") {
    QtSchemeParams s;
    s.squeeze_db = cfg.qt_db;
    s.victor_angle = cfg.victor_angle;
    s.gamma_a = filters.gamma1;
    s.delta_a = filters.delta1;
    s.gamma_v = filters.gamma2;
    s.delta_v = filters.delta2;
    return qt_budget(cfg.plant, s, cfg.losses, cfg.phase_noise, grid);
  }
  if (scheme == "baseline-fds") {
    BaselineSchemeParams s;
    s.squeeze_db = cfg.baseline_db;
    s.source_angle = cfg.victor_angle;
    s.gamma_1 = filters.gamma1;
    s.delta_1 = filters.delta1;
    s.gamma_2 = filters.gamma2;
    s.delta_2 = filters.delta2;
    return baseline_fds_budget(cfg.plant, s, cfg.losses, cfg.phase_noise, grid);
  }
  return no_squeeze_budget(cfg.plant, cfg.losses, grid);
}

std::vector<double> to_asd(const std::vector<double>& psd) {
  std::vector<double> out(psd.size());
  for (std::size_t i = 0; i < psd.size(); ++i) out[i] = std::sqrt(psd[i]);
  return out;
}

int cmd_sensitivity(const CommonFlags& flags) {
  const RunConfig cfg = load_config(flags);
  const FrequencyGrid grid = cfg.make_grid();
  const SearchTargets filters = resolve_filters(cfg);
  std::vector<double> freq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) freq[i] = grid.hz(i);

  std::vector<Column> enh = {{"frequency", "Hz", freq}};
  std::vector<std::pair<std::string, std::vector<double>>> curves;
  for (const auto& scheme : cfg.schemes) {
    const NoiseBudget nb = run_scheme(cfg, filters, scheme, grid);
    const auto asd = to_asd(nb.total);
    write_table(out_path(cfg, "sensitivity_" + scheme + ".csv"),
                "quantum-noise strain sensitivity, scheme " + scheme,
                {{"frequency", "Hz", freq},
                 {"strain_asd", "1/sqrt(Hz)", asd},
                 {"reference_asd", "1/sqrt(Hz)", to_asd(nb.reference)},
                 {"sql_asd", "1/sqrt(Hz)", to_asd(nb.sql)}},
                cfg.hash());
    enh.push_back({scheme, "dB", nb.improvement_db()});
    curves.push_back({scheme, asd});
  }
  write_table(out_path(cfg, "enhancement_db.csv"),
              "noise suppression vs no-squeeze reference", enh, cfg.hash());
  if (cfg.plots)
    write_svg_loglog(out_path(cfg, "sensitivity.svg"),
                     "strain sensitivity", freq, curves);
  return 0;
}

int cmd_budget(const CommonFlags& flags) {
  const RunConfig cfg = load_config(flags);
  const FrequencyGrid grid = cfg.make_grid();
  const SearchTargets filters = resolve_filters(cfg);
  std::vector<double> freq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) freq[i] = grid.hz(i);
  for (const auto& scheme : cfg.schemes) {
    const NoiseBudget nb = run_scheme(cfg, filters, scheme, grid);
    std::vector<Column> cols = {{"frequency", "Hz", freq},
                                {"total_psd", "1/Hz", nb.total}};
    for (const auto& [name, comp] : nb.components)
      cols.push_back({name + "_psd", "1/Hz", comp});
    cols.push_back({"reference_psd", "1/Hz", nb.reference});
    cols.push_back({"sql_psd", "1/Hz", nb.sql});
    cols.push_back({"total_asd", "1/sqrt(Hz)", to_asd(nb.total)});
    write_table(out_path(cfg, "budget_" + scheme + ".csv"),
                "strain-referred noise budget, scheme " + scheme, cols,
                cfg.hash());
    if (cfg.plots) {
      std::vector<std::pair<std::string, std::vector<double>>> curves = {
          {"total", to_asd(nb.total)}};
      for (const auto& [name, comp] : nb.components)
        curves.push_back({name, to_asd(comp)});
      write_svg_loglog(out_path(cfg, "budget_" + scheme + ".svg"),
                       "noise budget " + scheme, freq, curves);
    }
  }
  return 0;
}

int cmd_search(const CommonFlags& flags) {
  const RunConfig cfg = load_config(flags);
  const SearchResult res = search_lengths(cfg.plant, cfg.targets, cfg.ranges);
  auto one = [](double v) { return std::vector<double>{v}; };
  write_table(
      out_path(cfg, "search_result.csv"), "filter parameter search",
      {{"delta_a", "Hz", one(res.delta_a / (2 * pi))},
       {"delta_v", "Hz", one(res.delta_v / (2 * pi))},
       {"n_a", "1", one(double(res.n_a))},
       {"n_v", "1", one(double(res.n_v))},
       {"q", "1", one(double(res.q))},
       {"p", "1", one(double(res.p))},
       {"arm_length", "m", one(res.arm_length)},
       {"sec_length", "m", one(res.sec_length)},
       {"gamma_a_achieved", "Hz", one(res.achieved_a.gamma / (2 * pi))},
       {"delta_a_achieved", "Hz", one(res.achieved_a.delta / (2 * pi))},
       {"gamma_v_achieved", "Hz", one(res.achieved_v.gamma / (2 * pi))},
       {"delta_v_achieved", "Hz", one(res.achieved_v.delta / (2 * pi))},
       {"max_angle_error", "rad", one(res.max_angle_error)}},
      cfg.hash());
  write_table(out_path(cfg, "angle_error.csv"),
              "in-band rotation-compensation residual",
              {{"frequency", "Hz", res.angle_error_hz},
               {"angle_error", "rad", res.angle_error_rad}},
              cfg.hash());
  std::cout << "search: q=" << res.q << " p=" << res.p << " n_a=" << res.n_a
            << " n_v=" << res.n_v
            << " max in-band angle error = " << res.max_angle_error
            << " rad\n";
  return 0;
}

int cmd_horizon(const CommonFlags& flags) {
  const RunConfig cfg = load_config(flags);
  const FrequencyGrid grid = cfg.make_grid();
  const SearchTargets filters = resolve_filters(cfg);

  std::vector<double> masses(cfg.horizon.points);
  const double lmin = std::log(cfg.horizon.mass_min_msun);
  const double lmax = std::log(cfg.horizon.mass_max_msun);
  for (std::size_t i = 0; i < masses.size(); ++i)
    masses[i] =
        std::exp(lmin + (lmax - lmin) * double(i) / double(masses.size() - 1));

  const double threshold = cfg.horizon.snr_threshold *
                           (cfg.horizon.sky_average ? std::sqrt(5.0) : 1.0);

  std::vector<Column> cols = {{"total_mass", "Msun", masses}};
  for (const auto& scheme : cfg.schemes) {
    const NoiseBudget nb = run_scheme(cfg, filters, scheme, grid);
    AsdTable quantum;
    quantum.label = scheme;
    quantum.freq_hz.resize(grid.size());
    quantum.asd = to_asd(nb.total);
    for (std::size_t i = 0; i < grid.size(); ++i)
      quantum.freq_hz[i] = grid.hz(i);
    std::vector<AsdTable> tables = {quantum};
    for (const auto& f : cfg.asd_files) tables.push_back(read_asd_table(f));
    const AsdTable combined =
        tables.size() > 1 ? combine_asd(tables, grid) : quantum;
    const HorizonCurve hc =
        horizon_curve(combined, masses, threshold, cfg.horizon.cosmo);
    cols.push_back({"distance_" + scheme, "Mpc", hc.distance_mpc});
    cols.push_back({"redshift_" + scheme, "1", hc.redshift});
  }
  write_table(out_path(cfg, "horizon.csv"),
              "inspiral detection horizon", cols, cfg.hash());
  if (cfg.plots) {
    std::vector<std::pair<std::string, std::vector<double>>> curves;
    for (std::size_t i = 1; i < cols.size(); i += 2)
      curves.push_back({cols[i].name, cols[i].values});
    write_svg_loglog(out_path(cfg, "horizon.svg"),
                     "detection horizon", masses, curves);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-noise simulator for teleportation-based "
               "frequency-dependent squeezing"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto* sens = app.add_subcommand("sensitivity", "strain sensitivity curves");
  auto* budg = app.add_subcommand("budget", "per-source noise budget");
  auto* srch = app.add_subcommand("search", "filter parameter search");
  auto* hori = app.add_subcommand("horizon", "inspiral horizon figures of merit");
  for (auto* cmd : {sens, budg, srch, hori}) add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sens->parsed()) return cmd_sensitivity(flags);
    if (budg->parsed()) return cmd_budget(flags);
    if (srch->parsed()) return cmd_search(flags);
    if (hori->parsed()) return cmd_horizon(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnreachableBandwidth& e) {
    std::cerr << "infeasible search: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()).find("no feasible") != std::string::npos ||
        std::string(e.what()).find("no SEC branch") != std::string::npos) {
      std::cerr << "infeasible search: " << e.what() << "\n";
      return 3;
    }
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
