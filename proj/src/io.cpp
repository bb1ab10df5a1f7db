#include "qtfds/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtfds {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

} // namespace

void write_table(const std::string& path, const std::string& title,
                 const std::vector<Column>& columns,
                 const std::string& config_hash) {
  if (columns.empty()) throw std::invalid_argument("write_table: no columns");
  const std::size_t n = columns.front().values.size();
  for (const auto& c : columns)
    if (c.values.size() != n)
      throw std::invalid_argument("write_table: ragged columns");
  std::ostringstream o;
  o << "# " << title << "\n";
  o << "# config_hash: " << config_hash << "\n";
  o << "# units:";
  for (const auto& c : columns) o << " " << c.name << "[" << c.unit << "]";
  o << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    o << (i ? "," : "") << columns[i].name;
  o << "\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      o << (i ? "," : "") << fmt(columns[i].values[r]);
    o << "\n";
  }
  atomic_write(path, o.str());
}

AsdTable read_asd_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ASD file: " + path);
  AsdTable t;
  t.label = std::filesystem::path(path).stem().string();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == '\t' || ch == ';') ch = ' ';
    if (line.find_first_not_of(" \r") == std::string::npos) continue;
    std::istringstream row(line);
    double f, a;
    if (!(row >> f >> a))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two numeric columns");
    t.freq_hz.push_back(f);
    t.asd.push_back(a);
  }
  t.validate();
  return t;
}

void write_asd_table(const std::string& path, const AsdTable& table,
                     const std::string& config_hash) {
  std::vector<Column> cols = {{"frequency", "Hz", table.freq_hz},
                              {"asd", "1/sqrt(Hz)", table.asd}};
  write_table(path, "amplitude spectral density: " + table.label, cols,
              config_hash);
}

void write_svg_loglog(
    const std::string& path, const std::string& title,
    const std::vector<double>& x,
    const std::vector<std::pair<std::string, std::vector<double>>>& curves) {
  const double W = 860, H = 560, ml = 70, mr = 180, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (const auto& [name, ys] : curves)
    for (double v : ys)
      if (v > 0) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
  if (!(xmin > 0) || !(ymin > 0) || !(xmax > xmin) || !(ymax > ymin))
    throw std::invalid_argument("write_svg_loglog: need positive data");
  auto px = [&](double v) {
    return ml + (std::log10(v) - std::log10(xmin)) /
                    (std::log10(xmax) - std::log10(xmin)) * (W - ml - mr);
  };
  auto py = [&](double v) {
    return H - mb - (std::log10(v) - std::log10(ymin)) /
                        (std::log10(ymax) - std::log10(ymin)) * (H - mt - mb);
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream o;
  o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
    << H << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  o << "<text x='" << W / 2 << "' y='22' text-anchor='middle' "
       "font-family='sans-serif' font-size='15'>"
    << title << "</text>\n";
  // decade gridlines
  for (int d = (int)std::ceil(std::log10(xmin)); d <= std::log10(xmax); ++d) {
    const double v = std::pow(10.0, d);
    o << "<line x1='" << px(v) << "' y1='" << mt << "' x2='" << px(v)
      << "' y2='" << H - mb << "' stroke='#ddd'/>\n";
    o << "<text x='" << px(v) << "' y='" << H - mb + 18
      << "' text-anchor='middle' font-family='sans-serif' font-size='11'>1e"
      << d << "</text>\n";
  }
  for (int d = (int)std::ceil(std::log10(ymin)); d <= std::log10(ymax); ++d) {
    const double v = std::pow(10.0, d);
    o << "<line x1='" << ml << "' y1='" << py(v) << "' x2='" << W - mr
      << "' y2='" << py(v) << "' stroke='#ddd'/>\n";
    o << "<text x='" << ml - 6 << "' y='" << py(v) + 4
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>1e" << d
      << "</text>\n";
  }
  int ci = 0;
  for (const auto& [name, ys] : curves) {
    const char* color = palette[ci % 8];
    o << "<polyline fill='none' stroke='" << color << "' stroke-width='1.6' points='";
    for (std::size_t i = 0; i < x.size() && i < ys.size(); ++i) {
      if (!(ys[i] > 0)) continue;
      o << px(x[i]) << "," << py(ys[i]) << " ";
    }
    o << "'/>\n";
    o << "<text x='" << W - mr + 10 << "' y='" << mt + 16 * ci + 12
      << "' font-family='sans-serif' font-size='12' fill='" << color << "'>"
      << name << "</text>\n";
    ++ci;
  }
  o << "</svg>\n";
  atomic_write(path, o.str());
}

} // namespace qtfds
