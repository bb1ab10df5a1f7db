#include "qtfds/readout.hpp"

#include <cmath>
#include <stdexcept>

namespace qtfds {

ChannelRow homodyne_b2(const TransferMap& plant_map, double lo_offset) {
  ChannelRow row(plant_map.grid(), plant_map.registry());
  const double s = std::sin(lo_offset), c = std::cos(lo_offset);
  for (std::size_t i = 0; i < plant_map.grid().size(); ++i)
    row.at(i) = s * plant_map.at(i).row(0) + c * plant_map.at(i).row(1);
  return row;
}

std::pair<ChannelRow, ChannelRow> bell_project(const TransferMap& victor_map,
                                               const TransferMap& alice_map,
                                               const BellAngles& angles) {
  if (victor_map.cols() != alice_map.cols() ||
      victor_map.grid().size() != alice_map.grid().size())
    throw std::invalid_argument("bell_project: maps must share a registry/grid");
  ChannelRow a1(victor_map.grid(), victor_map.registry());
  ChannelRow a2(victor_map.grid(), victor_map.registry());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto fill = [&](ChannelRow& out, double xi) {
    const double za = -xi + std::numbers::pi / 2.0 + angles.arg_d;
    const double zv = xi + std::numbers::pi / 2.0 + angles.arg_d;
    for (std::size_t i = 0; i < out.grid().size(); ++i) {
      RowXcd arow = std::sin(za) * alice_map.at(i).row(0) +
                    std::cos(za) * alice_map.at(i).row(1);
      RowXcd vrow = std::sin(zv) * victor_map.at(i).row(0) +
                    std::cos(zv) * victor_map.at(i).row(1);
      out.at(i) = inv_sqrt2 * (arow + vrow);
    }
  };
  fill(a1, angles.xi_i);
  fill(a2, angles.xi_q);
  return {std::move(a1), std::move(a2)};
}

} // namespace qtfds
