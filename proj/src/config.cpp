#include "qtfds/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace qtfds {

using std::numbers::pi;

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.targets.gamma1 = 2.0 * pi * 4.27;
  c.targets.delta1 = 2.0 * pi * 19.54;
  c.targets.gamma2 = 2.0 * pi * 1.64;
  c.targets.delta2 = 2.0 * pi * -7.62;
  return c;
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Sections tokenize(const std::string& text, const std::string& origin) {
  Sections out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    if (out[section].count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    out[section][key] = Entry{trim(line.substr(eq + 1)), lineno, false};
  }
  return out;
}

class Reader {
 public:
  Reader(Sections s, std::string origin)
      : sections_(std::move(s)), origin_(std::move(origin)) {}

  template <typename T>
  void get(const std::string& sec, const std::string& key, T& dst) {
    auto s = sections_.find(sec);
    if (s == sections_.end()) return;
    auto k = s->second.find(key);
    if (k == s->second.end()) return;
    k->second.used = true;
    parse(k->second, key, dst);
  }

  void finish() const {
    for (const auto& [sec, keys] : sections_)
      for (const auto& [key, e] : keys)
        if (!e.used)
          throw ConfigError(origin_ + ":" + std::to_string(e.line) +
                            ": unknown key '" + sec + "." + key + "'");
  }

 private:
  [[noreturn]] void fail(const Entry& e, const std::string& key,
                         const char* what) const {
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                      key + "': " + what);
  }

  void parse(const Entry& e, const std::string& key, double& dst) const {
    try {
      std::size_t pos = 0;
      dst = std::stod(e.value, &pos);
      if (pos != e.value.size()) fail(e, key, "trailing characters");
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      fail(e, key, "not a number");
    }
  }
  void parse(const Entry& e, const std::string& key, std::size_t& dst) const {
    long long v = 0;
    parse_int(e, key, v);
    if (v < 0) fail(e, key, "must be non-negative");
    dst = static_cast<std::size_t>(v);
  }
  void parse(const Entry& e, const std::string& key, std::int64_t& dst) const {
    long long v = 0;
    parse_int(e, key, v);
    dst = v;
  }
  void parse(const Entry& e, const std::string& key,
             unsigned long long& dst) const {
    long long v = 0;
    parse_int(e, key, v);
    if (v < 0) fail(e, key, "must be non-negative");
    dst = static_cast<unsigned long long>(v);
  }
  void parse_int(const Entry& e, const std::string& key, long long& dst) const {
    const auto* b = e.value.data();
    const auto* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, dst);
    if (ec != std::errc{} || p != end) fail(e, key, "not an integer");
  }
  void parse(const Entry& e, const std::string& key, bool& dst) const {
    if (e.value == "true" || e.value == "1")
      dst = true;
    else if (e.value == "false" || e.value == "0")
      dst = false;
    else
      fail(e, key, "expected true/false");
  }
  void parse(const Entry& e, const std::string&, std::string& dst) const {
    dst = e.value;
  }
  void parse(const Entry& e, const std::string& key,
             std::vector<std::string>& dst) const {
    dst.clear();
    std::string item;
    std::istringstream in(e.value);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) dst.push_back(item);
    }
    if (dst.empty()) fail(e, key, "empty list");
  }
  void parse(const Entry& e, const std::string& key, FilterMode& dst) const {
    if (e.value == "fit")
      dst = FilterMode::Fit;
    else if (e.value == "table")
      dst = FilterMode::Table;
    else
      fail(e, key, "expected fit|table");
  }

  Sections sections_;
  std::string origin_;
};

} // namespace

RunConfig RunConfig::from_string(const std::string& text,
                                 const std::string& origin) {
  RunConfig c = defaults();
  Reader r(tokenize(text, origin), origin);

  r.get("grid", "fmin_hz", c.grid.fmin_hz);
  r.get("grid", "fmax_hz", c.grid.fmax_hz);
  r.get("grid", "points", c.grid.points);

  r.get("plant", "wavelength_m", c.plant.wavelength);
  r.get("plant", "t_itm", c.plant.T_itm);
  r.get("plant", "t_sem", c.plant.T_sem);
  r.get("plant", "mirror_mass_kg", c.plant.mirror_mass);
  r.get("plant", "reduced_mass_kg", c.plant.reduced_mass);
  r.get("plant", "bs_power_w", c.plant.bs_power);
  r.get("plant", "arm_power_w", c.plant.arm_power);
  r.get("plant", "phi0_rad", c.plant.phi0);
  r.get("plant", "arm_length_m", c.plant.L_arm);
  r.get("plant", "sec_length_m", c.plant.L_sec);

  r.get("squeeze", "qt_db", c.qt_db);
  r.get("squeeze", "baseline_db", c.baseline_db);
  r.get("squeeze", "victor_angle_rad", c.victor_angle);

  r.get("filters", "mode", c.filter_mode);
  double g1 = c.targets.gamma1 / (2 * pi), d1 = c.targets.delta1 / (2 * pi);
  double g2 = c.targets.gamma2 / (2 * pi), d2 = c.targets.delta2 / (2 * pi);
  r.get("filters", "gamma1_hz", g1);
  r.get("filters", "delta1_hz", d1);
  r.get("filters", "gamma2_hz", g2);
  r.get("filters", "delta2_hz", d2);
  c.targets.gamma1 = 2 * pi * g1;
  c.targets.delta1 = 2 * pi * d1;
  c.targets.gamma2 = 2 * pi * g2;
  c.targets.delta2 = 2 * pi * d2;

  r.get("losses", "injection", c.losses.injection);
  r.get("losses", "arm_rtl", c.losses.arm_rtl);
  r.get("losses", "sec_loss", c.losses.sec_loss);
  r.get("losses", "readout", c.losses.readout);
  r.get("losses", "fc_rtl", c.losses.fc_rtl);
  r.get("losses", "fc_length_m", c.losses.fc_length);

  r.get("phase_noise", "squeezer_rms_rad", c.phase_noise.squeezer_rms);
  r.get("phase_noise", "lo_rms_rad", c.phase_noise.lo_rms);
  r.get("phase_noise", "sec_length_rms_m", c.phase_noise.sec_length_rms);
  r.get("phase_noise", "fc_length_rms_m", c.phase_noise.fc_length_rms);

  r.get("search", "band_fmin_hz", c.targets.band_fmin_hz);
  r.get("search", "band_fmax_hz", c.targets.band_fmax_hz);
  r.get("search", "angle_tolerance_rad", c.targets.angle_tolerance);
  r.get("search", "q_min", c.ranges.q_min);
  r.get("search", "q_max", c.ranges.q_max);
  r.get("search", "p_min", c.ranges.p_min);
  r.get("search", "p_max", c.ranges.p_max);
  r.get("search", "n_min", c.ranges.n_min);
  r.get("search", "n_max", c.ranges.n_max);
  double wa0 = c.ranges.delta_a_min_hz / 1e6, wa1 = c.ranges.delta_a_max_hz / 1e6;
  double wv0 = c.ranges.delta_v_min_hz / 1e6, wv1 = c.ranges.delta_v_max_hz / 1e6;
  r.get("search", "delta_a_min_mhz", wa0);
  r.get("search", "delta_a_max_mhz", wa1);
  r.get("search", "delta_v_min_mhz", wv0);
  r.get("search", "delta_v_max_mhz", wv1);
  c.ranges.delta_a_min_hz = wa0 * 1e6;
  c.ranges.delta_a_max_hz = wa1 * 1e6;
  c.ranges.delta_v_min_hz = wv0 * 1e6;
  c.ranges.delta_v_max_hz = wv1 * 1e6;

  r.get("horizon", "mass_min_msun", c.horizon.mass_min_msun);
  r.get("horizon", "mass_max_msun", c.horizon.mass_max_msun);
  r.get("horizon", "points", c.horizon.points);
  r.get("horizon", "snr_threshold", c.horizon.snr_threshold);
  r.get("horizon", "h0_km_s_mpc", c.horizon.cosmo.h0_km_s_mpc);
  r.get("horizon", "omega_m", c.horizon.cosmo.omega_m);
  r.get("horizon", "sky_average", c.horizon.sky_average);

  r.get("astro", "asd_files", c.asd_files);

  r.get("run", "schemes", c.schemes);
  r.get("run", "seed", c.seed);

  r.get("output", "dir", c.out_dir);
  r.get("output", "plots", c.plots);

  r.finish();
  c.validate();
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

void RunConfig::validate() const {
  plant.validate();
  losses.validate();
  phase_noise.validate();
  targets.validate();
  if (!(grid.fmin_hz > 0) || !(grid.fmax_hz > grid.fmin_hz) || grid.points < 2)
    throw ConfigError("config: bad grid specification");
  if (!(qt_db >= 0) || !(baseline_db >= 0))
    throw ConfigError("config: squeeze levels must be >= 0 dB");
  if (schemes.empty()) throw ConfigError("config: empty scheme list");
  for (const auto& s : schemes)
    if (s != "qt" && s != "baseline-fds" && s != "no-squeeze")
      throw ConfigError("config: unknown scheme '" + s +
                        "' (expected qt|baseline-fds|no-squeeze)");
  if (!(horizon.mass_min_msun > 0) ||
      !(horizon.mass_max_msun > horizon.mass_min_msun) || horizon.points < 2)
    throw ConfigError("config: bad horizon mass grid");
  if (!(horizon.snr_threshold > 0) || !(horizon.cosmo.h0_km_s_mpc > 0) ||
      horizon.cosmo.omega_m < 0 || horizon.cosmo.omega_m > 1)
    throw ConfigError("config: bad horizon threshold or cosmology");
}

FrequencyGrid RunConfig::make_grid() const {
  return FrequencyGrid::log_spaced(grid.fmin_hz, grid.fmax_hz, grid.points);
}

namespace {

void kv(std::ostringstream& o, const char* k, double v) {
  o << k << " = ";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  o << buf << "\n";
}

} // namespace

std::string RunConfig::canonical(bool include_output) const {
  std::ostringstream o;
  o << "[grid]\n";
  kv(o, "fmin_hz", grid.fmin_hz);
  kv(o, "fmax_hz", grid.fmax_hz);
  o << "points = " << grid.points << "\n";
  o << "[plant]\n";
  kv(o, "wavelength_m", plant.wavelength);
  kv(o, "t_itm", plant.T_itm);
  kv(o, "t_sem", plant.T_sem);
  kv(o, "mirror_mass_kg", plant.mirror_mass);
  kv(o, "reduced_mass_kg", plant.reduced_mass);
  kv(o, "bs_power_w", plant.bs_power);
  kv(o, "arm_power_w", plant.arm_power);
  kv(o, "phi0_rad", plant.phi0);
  kv(o, "arm_length_m", plant.L_arm);
  kv(o, "sec_length_m", plant.L_sec);
  o << "[squeeze]\n";
  kv(o, "qt_db", qt_db);
  kv(o, "baseline_db", baseline_db);
  kv(o, "victor_angle_rad", victor_angle);
  o << "[filters]\n";
  o << "mode = " << (filter_mode == FilterMode::Fit ? "fit" : "table") << "\n";
  kv(o, "gamma1_hz", targets.gamma1 / (2 * pi));
  kv(o, "delta1_hz", targets.delta1 / (2 * pi));
  kv(o, "gamma2_hz", targets.gamma2 / (2 * pi));
  kv(o, "delta2_hz", targets.delta2 / (2 * pi));
  o << "[losses]\n";
  kv(o, "injection", losses.injection);
  kv(o, "arm_rtl", losses.arm_rtl);
  kv(o, "sec_loss", losses.sec_loss);
  kv(o, "readout", losses.readout);
  kv(o, "fc_rtl", losses.fc_rtl);
  kv(o, "fc_length_m", losses.fc_length);
  o << "[phase_noise]\n";
  kv(o, "squeezer_rms_rad", phase_noise.squeezer_rms);
  kv(o, "lo_rms_rad", phase_noise.lo_rms);
  kv(o, "sec_length_rms_m", phase_noise.sec_length_rms);
  kv(o, "fc_length_rms_m", phase_noise.fc_length_rms);
  o << "[search]\n";
  kv(o, "band_fmin_hz", targets.band_fmin_hz);
  kv(o, "band_fmax_hz", targets.band_fmax_hz);
  kv(o, "angle_tolerance_rad", targets.angle_tolerance);
  o << "q_min = " << ranges.q_min << "\n";
  o << "q_max = " << ranges.q_max << "\n";
  o << "p_min = " << ranges.p_min << "\n";
  o << "p_max = " << ranges.p_max << "\n";
  o << "n_min = " << ranges.n_min << "\n";
  o << "n_max = " << ranges.n_max << "\n";
  kv(o, "delta_a_min_mhz", ranges.delta_a_min_hz / 1e6);
  kv(o, "delta_a_max_mhz", ranges.delta_a_max_hz / 1e6);
  kv(o, "delta_v_min_mhz", ranges.delta_v_min_hz / 1e6);
  kv(o, "delta_v_max_mhz", ranges.delta_v_max_hz / 1e6);
  o << "[horizon]\n";
  kv(o, "mass_min_msun", horizon.mass_min_msun);
  kv(o, "mass_max_msun", horizon.mass_max_msun);
  o << "points = " << horizon.points << "\n";
  kv(o, "snr_threshold", horizon.snr_threshold);
  kv(o, "h0_km_s_mpc", horizon.cosmo.h0_km_s_mpc);
  kv(o, "omega_m", horizon.cosmo.omega_m);
  o << "sky_average = " << (horizon.sky_average ? "true" : "false") << "\n";
  if (!asd_files.empty()) {
    o << "[astro]\n";
    o << "asd_files = ";
    for (std::size_t i = 0; i < asd_files.size(); ++i)
      o << (i ? "," : "") << asd_files[i];
    o << "\n";
  }
  o << "[run]\n";
  o << "schemes = ";
  for (std::size_t i = 0; i < schemes.size(); ++i)
    o << (i ? "," : "") << schemes[i];
  o << "\n";
  o << "seed = " << seed << "\n";
  if (include_output) {
    o << "[output]\n";
    o << "dir = " << out_dir << "\n";
    o << "plots = " << (plots ? "true" : "false") << "\n";
  }
  return o.str();
}

std::string RunConfig::hash() const {
  // FNV-1a 64
  const std::string s = canonical(false);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace qtfds
