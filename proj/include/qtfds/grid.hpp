#pragma once

#include <cstddef>
#include <vector>

namespace qtfds {

/// Set of sideband frequencies (rad/s) at which all spectra are evaluated.
/// Strictly positive, strictly increasing.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> omega_rad_s);

  /// 400 log-spaced points over 1 Hz .. 1 kHz unless told otherwise.
  static FrequencyGrid log_spaced(double fmin_hz = 1.0, double fmax_hz = 1e3,
                                  std::size_t n = 400);

  std::size_t size() const { return omega_.size(); }
  double omega(std::size_t i) const { return omega_[i]; }
  double hz(std::size_t i) const;
  const std::vector<double>& values() const { return omega_; }

 private:
  std::vector<double> omega_;
};

} // namespace qtfds
