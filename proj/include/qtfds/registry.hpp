#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qtfds {

/// Registered vacuum input ports and their joint quadrature covariance.
///
/// Each port is one (amplitude, phase) quadrature pair occupying two adjacent
/// columns of every transfer map defined over the registry. Sources are white:
/// the input covariance is a single real symmetric 2N x 2N matrix of one-sided
/// spectral densities, with vacuum normalized to 1 per quadrature.
class ModeRegistry {
 public:
  /// Adds a port with the given 2x2 covariance block. Unsqueezed vacuum is the
  /// identity block. Throws on duplicate label or invalid block.
  std::size_t register_port(const std::string& label,
                            const Eigen::Matrix2d& block);

  /// Adds a vacuum port (identity block).
  std::size_t register_vacuum(const std::string& label);

  /// Adds two ports sharing a joint 4x4 covariance block (an entangled pair).
  std::pair<std::size_t, std::size_t> register_entangled_pair(
      const std::string& label_a, const std::string& label_b,
      const Eigen::Matrix4d& joint);

  std::size_t ports() const { return labels_.size(); }
  std::size_t dim() const { return 2 * labels_.size(); }
  bool has(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  /// First covariance/transfer column of the port.
  std::size_t col(const std::string& label) const { return 2 * index_of(label); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// The assembled 2N x 2N input covariance.
  const Eigen::MatrixXd& covariance() const { return cov_; }

 private:
  void check_new_label(const std::string& label) const;
  std::vector<std::string> labels_;
  Eigen::MatrixXd cov_{0, 0};
};

} // namespace qtfds
