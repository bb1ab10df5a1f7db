#pragma once

#include <Eigen/Dense>

namespace qtfds {

/// Squeezer settings for one pump. The same squeeze factor is used for both
/// pump frequencies.
struct SqueezeParams {
  double r = 0.0;         // squeeze factor, r >= 0
  double delta_a = 0.0;   // Alice detuning (rad/s)
  double delta_v = 0.0;   // Victor detuning (rad/s)

  static double r_from_db(double db);
  static double db_from_r(double r);
};

/// Joint 4x4 covariance of the EPR pair (Alice, Bob), quadrature order
/// (a1, a2, b1, b2): diagonals cosh 2r, cross terms S_{a1 b1} = +sinh 2r and
/// S_{a2 b2} = -sinh 2r, so the (a1 - b1)/sqrt(2) and (a2 + b2)/sqrt(2)
/// combinations are squeezed to e^{-2r}.
Eigen::Matrix4d epr_block(double r);

/// diag(e^{-2r}, e^{+2r}): amplitude-squeezed single beam.
Eigen::Matrix2d squeezed_block(double r);

/// squeezed_block rotated so the squeezed axis sits at `angle`.
Eigen::Matrix2d squeezed_block(double r, double angle);

/// Conditional variances of Bob's (theta, theta + pi/2) quadratures given a
/// measurement of Alice's -theta quadrature, via the Schur complement of the
/// joint block. Returns (1/cosh 2r, cosh 2r) for a valid epr_block, independent
/// of theta.
std::pair<double, double> conditional_variance(const Eigen::Matrix4d& joint,
                                               double theta);

} // namespace qtfds
