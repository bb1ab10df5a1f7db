#pragma once

#include <string>
#include <vector>

#include "qtfds/astro.hpp"
#include "qtfds/budget.hpp"
#include "qtfds/plant.hpp"
#include "qtfds/search.hpp"

namespace qtfds {

/// Schema / parse failure; the message carries the offending key and line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// How the two filter pairs used by the budgets are chosen:
///  - fit: minimax angle-error fit seeded at the configured values
///  - table: use the configured values as-is
enum class FilterMode { Fit, Table };

struct GridSpec {
  double fmin_hz = 1.0;
  double fmax_hz = 1000.0;
  std::size_t points = 400;
};

struct HorizonSpec {
  double mass_min_msun = 2.0;
  double mass_max_msun = 3000.0;
  std::size_t points = 60;
  double snr_threshold = 8.0;
  Cosmology cosmo;
  bool sky_average = false;  // applies the 1/5 average to SNR^2
};

struct RunConfig {
  GridSpec grid;
  PlantParams plant;
  double qt_db = 15.0;
  double baseline_db = 10.0;
  double victor_angle = 1.5707963267948966;
  FilterMode filter_mode = FilterMode::Fit;
  SearchTargets targets;  // also the filter seed/values (table sign)
  SearchRanges ranges;
  LossBudgetParams losses;
  PhaseNoiseParams phase_noise;
  HorizonSpec horizon;
  std::vector<std::string> asd_files;
  std::vector<std::string> schemes = {"qt", "baseline-fds", "no-squeeze"};
  std::string out_dir = "out";
  bool plots = false;
  unsigned long long seed = 1;  // Monte-Carlo cross-checks only

  static RunConfig defaults();

  /// Parses sectioned key=value text; unknown sections/keys and malformed
  /// values raise ConfigError with a line diagnostic. Parsing starts from the
  /// defaults, so partial files are valid.
  static RunConfig from_string(const std::string& text,
                               const std::string& origin = "<config>");
  static RunConfig from_file(const std::string& path);

  /// Canonical serialization (also valid input). The [output] section is
  /// omitted when include_output is false, so tables written to different
  /// directories from the same physics configuration hash identically.
  std::string canonical(bool include_output = true) const;
  /// FNV-1a 64 over the canonical form without [output], hex.
  std::string hash() const;

  FrequencyGrid make_grid() const;
  void validate() const;
};

} // namespace qtfds
