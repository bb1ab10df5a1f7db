#include "qtfds/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtfds {

FrequencyGrid::FrequencyGrid(std::vector<double> omega_rad_s)
    : omega_(std::move(omega_rad_s)) {
  if (omega_.empty()) throw std::invalid_argument("FrequencyGrid: empty");
  double prev = 0.0;
  for (double w : omega_) {
    if (!(w > prev))
      throw std::invalid_argument(
          "FrequencyGrid: values must be positive and strictly increasing");
    prev = w;
  }
}

FrequencyGrid FrequencyGrid::log_spaced(double fmin_hz, double fmax_hz,
                                        std::size_t n) {
  if (!(fmin_hz > 0.0) || !(fmax_hz > fmin_hz) || n < 2)
    throw std::invalid_argument("FrequencyGrid::log_spaced: bad range");
  std::vector<double> w(n);
  const double lmin = std::log(fmin_hz), lmax = std::log(fmax_hz);
  for (std::size_t i = 0; i < n; ++i) {
    const double f =
        std::exp(lmin + (lmax - lmin) * double(i) / double(n - 1));
    w[i] = 2.0 * std::numbers::pi * f;
  }
  return FrequencyGrid(std::move(w));
}

double FrequencyGrid::hz(std::size_t i) const {
  return omega_[i] / (2.0 * std::numbers::pi);
}

} // namespace qtfds
