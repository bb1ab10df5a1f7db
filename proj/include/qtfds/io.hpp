#pragma once

#include <string>
#include <vector>

#include "qtfds/astro.hpp"

namespace qtfds {

/// One named, unit-carrying output column.
struct Column {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// Writes a CSV table with '#' header lines naming the units and the config
/// hash. The write is atomic (tmp file + rename) and the formatting is fixed,
/// so identical inputs give byte-identical files.
void write_table(const std::string& path, const std::string& title,
                 const std::vector<Column>& columns,
                 const std::string& config_hash);

/// Two-column delimited text, '#' comments: frequency_Hz, asd_per_rtHz.
AsdTable read_asd_table(const std::string& path);
void write_asd_table(const std::string& path, const AsdTable& table,
                     const std::string& config_hash);

/// Minimal log-log polyline plot of y(x) curves; a derived artifact, not part
/// of the regression surface.
void write_svg_loglog(const std::string& path, const std::string& title,
                      const std::vector<double>& x,
                      const std::vector<std::pair<std::string,
                                                  std::vector<double>>>& curves);

} // namespace qtfds
