#include "qtfds/registry.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtfds {

namespace {

void check_sym_psd(const Eigen::MatrixXd& b, const char* what) {
  if (!b.isApprox(b.transpose(), 1e-12))
    throw std::invalid_argument(std::string(what) + ": block not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-12 * scale)
    throw std::invalid_argument(std::string(what) +
                                ": block not positive semi-definite");
}

} // namespace

void ModeRegistry::check_new_label(const std::string& label) const {
  if (label.empty()) throw std::invalid_argument("port label empty");
  if (has(label))
    throw std::invalid_argument("duplicate port label: " + label);
}

std::size_t ModeRegistry::register_port(const std::string& label,
                                        const Eigen::Matrix2d& block) {
  check_new_label(label);
  check_sym_psd(block, "register_port");
  const std::size_t n = dim();
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(n + 2, n + 2);
  grown.topLeftCorner(n, n) = cov_;
  grown.block<2, 2>(n, n) = block;
  cov_.swap(grown);
  labels_.push_back(label);
  return labels_.size() - 1;
}

std::size_t ModeRegistry::register_vacuum(const std::string& label) {
  return register_port(label, Eigen::Matrix2d::Identity());
}

std::pair<std::size_t, std::size_t> ModeRegistry::register_entangled_pair(
    const std::string& label_a, const std::string& label_b,
    const Eigen::Matrix4d& joint) {
  check_new_label(label_a);
  if (label_a == label_b)
    throw std::invalid_argument("entangled pair labels must differ");
  check_new_label(label_b);
  check_sym_psd(joint, "register_entangled_pair");
  const std::size_t n = dim();
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(n + 4, n + 4);
  grown.topLeftCorner(n, n) = cov_;
  grown.block<4, 4>(n, n) = joint;
  cov_.swap(grown);
  labels_.push_back(label_a);
  labels_.push_back(label_b);
  return {labels_.size() - 2, labels_.size() - 1};
}

bool ModeRegistry::has(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t ModeRegistry::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw std::invalid_argument("unknown port label: " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

} // namespace qtfds
