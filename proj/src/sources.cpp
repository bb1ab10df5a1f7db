#include "qtfds/sources.hpp"

#include <cmath>
#include <stdexcept>

#include "qtfds/transfer.hpp"

namespace qtfds {

double SqueezeParams::r_from_db(double db) { return db * std::log(10.0) / 20.0; }
double SqueezeParams::db_from_r(double r) { return 20.0 * r / std::log(10.0); }

Eigen::Matrix4d epr_block(double r) {
  if (r < 0.0) throw std::invalid_argument("epr_block: negative r");
  const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
  Eigen::Matrix4d s = Eigen::Matrix4d::Identity() * ch;
  s(0, 2) = s(2, 0) = sh;
  s(1, 3) = s(3, 1) = -sh;
  return s;
}

Eigen::Matrix2d squeezed_block(double r) {
  if (r < 0.0) throw std::invalid_argument("squeezed_block: negative r");
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  s(0, 0) = std::exp(-2.0 * r);
  s(1, 1) = std::exp(2.0 * r);
  return s;
}

Eigen::Matrix2d squeezed_block(double r, double angle) {
  const Eigen::Matrix2d rot = rotation(angle);
  return rot * squeezed_block(r) * rot.transpose();
}

std::pair<double, double> conditional_variance(const Eigen::Matrix4d& joint,
                                               double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  // measured: a_{-theta} = a1 cos - a2 sin ; conditioned: b_theta, b_{theta+pi/2}
  Eigen::Vector4d m(c, -s, 0.0, 0.0);
  Eigen::Vector4d bt(0.0, 0.0, c, s);
  Eigen::Vector4d bp(0.0, 0.0, -s, c);
  const double smm = m.dot(joint * m);
  if (!(smm > 0.0))
    throw std::domain_error("conditional_variance: singular conditioning variance");
  auto cond = [&](const Eigen::Vector4d& b) {
    const double sbb = b.dot(joint * b);
    const double sbm = b.dot(joint * m);
    return sbb - sbm * sbm / smm;
  };
  return {cond(bt), cond(bp)};
}

} // namespace qtfds
