#include <doctest.h>

#include <numbers>
#include <random>

#include "qtfds/plant.hpp"
#include "qtfds/sources.hpp"
#include "qtfds/transfer.hpp"

using namespace qtfds;
using std::numbers::pi;

namespace {

TransferMap identity_map(const FrequencyGrid& grid, const ModeRegistry& reg,
                         const std::string& port) {
  TransferMap t(grid, reg);
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.set_block(i, port, Eigen::Matrix2cd::Identity());
  return t;
}

} // namespace

TEST_CASE("frequency grid invariants") {
  CHECK_THROWS_AS(FrequencyGrid({}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid({-1.0, 2.0}), std::invalid_argument);
  const auto g = FrequencyGrid::log_spaced(1.0, 1000.0, 400);
  CHECK(g.size() == 400);
  CHECK(g.hz(0) == doctest::Approx(1.0));
  CHECK(g.hz(399) == doctest::Approx(1000.0));
}

TEST_CASE("registry rejects duplicates and bad blocks") {
  ModeRegistry reg;
  reg.register_vacuum("loss_readout");
  CHECK(reg.covariance().isApprox(Eigen::Matrix2d::Identity()));
  CHECK_THROWS_AS(reg.register_vacuum("loss_readout"), std::invalid_argument);
  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues -1, 3
  CHECK_THROWS_AS(reg.register_port("bad", bad), std::invalid_argument);
  reg.register_port("victor", squeezed_block(1.0));
  CHECK(reg.covariance()(2, 2) == doctest::Approx(std::exp(-2.0)));
  CHECK(reg.covariance()(3, 3) == doctest::Approx(std::exp(2.0)));
  CHECK(reg.ports() == 2);
}

TEST_CASE("propagate identity and rotated vacuum") {
  const auto grid = FrequencyGrid::log_spaced(1, 1000, 16);
  ModeRegistry reg;
  reg.register_vacuum("v");
  const auto id = identity_map(grid, reg, "v");
  auto out = propagate(id);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(out.at(i).isApprox(Eigen::Matrix2cd::Identity(), 1e-14));

  for (double th : {0.3, -1.2, 2.9}) {
    const auto rot = compose(rotation(th).cast<cd>(), id);
    out = propagate(rot);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(out.at(i).isApprox(Eigen::Matrix2cd::Identity(), 1e-12));
  }
}

TEST_CASE("propagate ponderomotive phase row gives Gamma^2 cosh 2r") {
  const auto grid = FrequencyGrid::log_spaced(2, 500, 24);
  const double r = 0.8;
  ModeRegistry reg;
  reg.register_entangled_pair("alice", "bob", epr_block(r));
  PlantParams p;
  const auto cav = carrier_effective_cavity(p);
  TransferMap t(grid, reg);
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.set_block(i, "bob", plant_transfer(cav, grid.omega(i)));
  const auto out = propagate(t);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto resp = plant_angles(cav, grid.omega(i));
    CHECK(out.at(i)(1, 1).real() ==
          doctest::Approx(resp.gain * resp.gain * std::cosh(2 * r))
              .epsilon(1e-10));
  }
}

TEST_CASE("compose is associative-consistent and rotations form a group") {
  const auto grid = FrequencyGrid::log_spaced(1, 100, 8);
  ModeRegistry reg;
  reg.register_vacuum("v");
  const auto base = identity_map(grid, reg, "v");

  const auto t1 = compose(rotation(0.4).cast<cd>(), base);
  CHECK(compose(Eigen::Matrix2cd::Identity(), t1).at(3).isApprox(t1.at(3), 1e-15));

  const auto t12 = compose(rotation(0.7).cast<cd>(), t1);
  const auto direct = compose(rotation(1.1).cast<cd>(), base);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(t12.at(i).isApprox(direct.at(i), 1e-13));

  const auto undone = compose(rotation(-0.4).cast<cd>(), t1);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(undone.at(i).isApprox(base.at(i), 1e-13));
}

TEST_CASE("propagate(compose(A,T), S) equals embedded product") {
  const auto grid = FrequencyGrid::log_spaced(1, 100, 8);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-pi, pi);
  ModeRegistry reg;
  reg.register_port("victor", squeezed_block(0.6));
  reg.register_vacuum("l");
  for (int rep = 0; rep < 10; ++rep) {
    TransferMap t(grid, reg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.set_block(i, "victor", rotation(u(rng)).cast<cd>());
      t.set_block(i, "l", (0.3 * rotation(u(rng))).cast<cd>());
    }
    const Eigen::Matrix2cd a = rotation(u(rng)).cast<cd>();
    const auto lhs = propagate(compose(a, t));
    TransferMap manual = t;
    for (std::size_t i = 0; i < grid.size(); ++i) manual.at(i) = a * t.at(i);
    const auto rhs = propagate(manual);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((lhs.at(i) - rhs.at(i)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("propagation preserves hermiticity and positive semi-definiteness") {
  const auto grid = FrequencyGrid::log_spaced(1, 1000, 40);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-pi, pi);
  ModeRegistry reg;
  reg.register_entangled_pair("alice", "bob", epr_block(1.1));
  reg.register_vacuum("loss");
  PlantParams p;
  const auto cav = carrier_effective_cavity(p);
  TransferMap t(grid, reg);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.set_block(i, "bob", plant_transfer(cav, grid.omega(i)));
    t.set_block(i, "alice", rotation(u(rng)).cast<cd>());
    t.set_block(i, "loss", (0.1 * rotation(u(rng))).cast<cd>());
  }
  const auto out = propagate(t);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& s = out.at(i);
    CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(s);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * scale);
    CHECK(s(0, 0).real() >= 0.0);
    CHECK(s(1, 1).real() >= 0.0);
  }
}

TEST_CASE("products of rotations keep identity covariance") {
  const auto grid = FrequencyGrid::log_spaced(1, 100, 8);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-pi, pi);
  ModeRegistry reg;
  reg.register_vacuum("v");
  auto t = identity_map(grid, reg, "v");
  for (int k = 0; k < 6; ++k) t = compose(rotation(u(rng)).cast<cd>(), t);
  const auto out = propagate(t);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(out.at(i).isApprox(Eigen::Matrix2cd::Identity(), 1e-12));
}

TEST_CASE("propagate rejects dimension mismatch") {
  const auto grid = FrequencyGrid::log_spaced(1, 100, 4);
  ModeRegistry reg;
  reg.register_vacuum("v");
  TransferMap t(grid, reg);
  CHECK_THROWS_AS(propagate(t, Eigen::MatrixXd::Identity(4, 4)),
                  std::invalid_argument);
}
