#pragma once

namespace qtfds::constants {

inline constexpr double c_light = 299792458.0;        // m/s
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double G_newton = 6.67430e-11;       // m^3 kg^-1 s^-2
inline constexpr double M_sun = 1.98892e30;           // kg
inline constexpr double Mpc = 3.0856775814913673e22;  // m

} // namespace qtfds::constants
