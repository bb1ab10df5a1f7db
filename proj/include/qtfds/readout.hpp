#pragma once

#include <numbers>
#include <utility>

#include "qtfds/transfer.hpp"

namespace qtfds {

/// Local-oscillator / demodulation angles of the Bell measurement. The
/// defaults give exactly alpha_1 = (V1 - A1)/sqrt(2), alpha_2 = (V2 + A2)/sqrt(2).
struct BellAngles {
  double arg_d = std::numbers::pi / 2.0;   // LO angle
  double xi_i = -std::numbers::pi / 2.0;   // I demodulation phase
  double xi_q = std::numbers::pi;          // Q demodulation phase
};

/// Phase-quadrature homodyne row of the carrier beam. A nonzero lo_offset
/// rotates the measured quadrature: row = sin(lo) * B1 + cos(lo) * B2.
ChannelRow homodyne_b2(const TransferMap& plant_map, double lo_offset = 0.0);

/// Bell observables of the two idler beams. Per demodulation phase xi the
/// output is (A_{zeta_A} + V_{zeta_V})/sqrt(2) with zeta_A = -xi + pi/2 + arg D,
/// zeta_V = +xi + pi/2 + arg D, where X_zeta = X1 sin zeta + X2 cos zeta.
std::pair<ChannelRow, ChannelRow> bell_project(const TransferMap& victor_map,
                                               const TransferMap& alice_map,
                                               const BellAngles& angles = {});

} // namespace qtfds
