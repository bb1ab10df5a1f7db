#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qtfds/astro.hpp"

using namespace qtfds;

namespace {

AsdTable flat_table(double level, double fmin = 1.0, double fmax = 1000.0,
                    int n = 40) {
  AsdTable t;
  t.label = "flat";
  for (int i = 0; i < n; ++i) {
    const double f =
        fmin * std::pow(fmax / fmin, double(i) / double(n - 1));
    t.freq_hz.push_back(f);
    t.asd.push_back(level);
  }
  return t;
}

AsdTable sloped_table() {
  AsdTable t;
  t.label = "sloped";
  for (int i = 0; i < 60; ++i) {
    const double f = std::pow(10.0, double(i) / 20.0);  // 1..~900
    t.freq_hz.push_back(f);
    t.asd.push_back(1e-24 * (1.0 + 100.0 / f));
  }
  return t;
}

} // namespace

TEST_CASE("asd table validation") {
  AsdTable t;
  t.freq_hz = {1.0, 2.0};
  t.asd = {1e-24};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.asd = {1e-24, -1.0};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.freq_hz = {2.0, 1.0};
  t.asd = {1e-24, 1e-24};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("combining a single table resamples it onto the grid") {
  const auto grid = FrequencyGrid::log_spaced(2, 500, 50);
  const AsdTable t = sloped_table();
  const AsdTable c = combine_asd({t}, grid);
  for (std::size_t i = 0; i < c.freq_hz.size(); ++i)
    CHECK(c.asd[i] == doctest::Approx(t.at(c.freq_hz[i])).epsilon(1e-12));
}

TEST_CASE("combining two equal tables gives sqrt(2) of one") {
  const auto grid = FrequencyGrid::log_spaced(2, 500, 30);
  const AsdTable t = sloped_table();
  const AsdTable c = combine_asd({t, t}, grid);
  for (std::size_t i = 0; i < c.freq_hz.size(); ++i)
    CHECK(c.asd[i] ==
          doctest::Approx(std::sqrt(2.0) * t.at(c.freq_hz[i])).epsilon(1e-12));
}

TEST_CASE("combined curve is floor-dominated where the floor dominates") {
  const auto grid = FrequencyGrid::log_spaced(1, 1000, 60);
  const AsdTable steep = sloped_table();      // large at low f
  const AsdTable floor = flat_table(2e-24);   // dominates at high f
  const AsdTable c = combine_asd({steep, floor}, grid);
  CHECK(c.asd.front() == doctest::Approx(steep.at(c.freq_hz.front())).epsilon(0.01));
  CHECK(c.asd.back() == doctest::Approx(floor.asd.back()).epsilon(0.3));
}

TEST_CASE("disjoint supports are rejected") {
  const auto grid = FrequencyGrid::log_spaced(1, 1000, 20);
  const AsdTable low = flat_table(1e-24, 1.0, 5.0);
  const AsdTable high = flat_table(1e-24, 100.0, 800.0);
  CHECK_THROWS_AS(combine_asd({low, high}, grid), std::invalid_argument);
}

TEST_CASE("local snr halves when the distance doubles") {
  const AsdTable t = flat_table(1e-24);
  const double s1 = snr_local(t, 30.0, 100.0);
  const double s2 = snr_local(t, 30.0, 200.0);
  CHECK(s1 == doctest::Approx(2.0 * s2).epsilon(1e-12));
  CHECK(s1 > 0.0);
}

TEST_CASE("horizon is a fixed point of the snr threshold") {
  // band reaches 0.01 Hz so the redshifted ISCO of 1e4 Msun stays inside
  const AsdTable t = flat_table(1e-24, 0.01, 1000.0, 80);
  Cosmology cosmo;
  for (double m : {10.0, 100.0, 1e4}) {
    const HorizonPoint hp = horizon(t, m, 8.0, cosmo);
    CHECK(hp.distance_mpc > 0.0);
    CHECK(snr_at(t, m, hp.redshift, cosmo) == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(cosmo.luminosity_mpc(hp.redshift) ==
          doctest::Approx(hp.distance_mpc).epsilon(1e-12));
  }
}

TEST_CASE("horizon shrinks when noise grows or the threshold rises") {
  const AsdTable quiet = flat_table(1e-24);
  const AsdTable loud = flat_table(2e-24);
  for (double m : {5.0, 40.0, 400.0}) {
    const double dq = horizon(quiet, m).distance_mpc;
    const double dl = horizon(loud, m).distance_mpc;
    CHECK(dl <= dq + 1e-9);
    const double d16 = horizon(quiet, m, 16.0).distance_mpc;
    CHECK(d16 < dq);
  }
}

TEST_CASE("isco below the band is flagged") {
  const AsdTable t = flat_table(1e-24, 50.0, 1000.0);
  const HorizonPoint hp = horizon(t, 1e4);  // isco ~ 0.44 Hz
  CHECK(hp.isco_below_band);
  CHECK(hp.distance_mpc == 0.0);
}

TEST_CASE("unreachable threshold returns zero distance") {
  const AsdTable t = flat_table(1e-10);  // hopelessly loud
  const HorizonPoint hp = horizon(t, 30.0);
  CHECK(hp.distance_mpc == 0.0);
  CHECK_FALSE(hp.isco_below_band);
}

TEST_CASE("horizon curve matches pointwise evaluation") {
  const AsdTable t = sloped_table();
  const std::vector<double> masses = {5.0, 50.0, 500.0};
  const HorizonCurve hc = horizon_curve(t, masses, 8.0, Cosmology{});
  for (std::size_t i = 0; i < masses.size(); ++i)
    CHECK(hc.distance_mpc[i] ==
          doctest::Approx(horizon(t, masses[i]).distance_mpc).epsilon(1e-12));
}
