#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

// Largest distance (mod 2 pi) between the two phase sets, matched greedily.
double phase_set_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double worst = 0.0;
  for (double x : a) {
    double best = INFINITY;
    for (double y : b) best = std::min(best, std::abs(wrap_phase(x - y)));
    worst = std::max(worst, best);
  }
  for (double y : b) {
    double best = INFINITY;
    for (double x : a) best = std::min(best, std::abs(wrap_phase(x - y)));
    worst = std::max(worst, best);
  }
  return worst;
}

double max_numeric_analytic_gap(const Coin& coin, int n) {
  const DispersionTable table = dispersion_numeric(coin, n);
  double worst = 0.0;
  for (std::size_t s = 0; s < table.size(); ++s) {
    const std::array<double, 3> numeric{table.omega[0][s], table.omega[1][s], table.omega[2][s]};
    worst = std::max(worst, phase_set_distance(numeric, dispersion_analytic(coin.family(), coin.parameter(), table.k[s])));
  }
  return worst;
}

double max_abs_flat(const DispersionTable& table) {
  double worst = 0.0;
  for (double w : table.omega[kFlatBranch]) worst = std::max(worst, std::abs(wrap_phase(w)));
  return worst;
}

}  // namespace

TEST_CASE("momentum propagator") {
  const Coin g = grover_coin();
  CHECK(oracle::max_abs(momentum_propagator(g, 0.0), g.matrix()) < 1e-15);
  CoinMatrix flip = CoinMatrix::Zero();
  flip.diagonal() << -1.0, 1.0, -1.0;
  CHECK(oracle::max_abs(momentum_propagator(g, pi), flip * g.matrix()) < 1e-15);
  const Coin identity = custom_coin(CoinMatrix::Identity());
  for (double k : {0.3, 1.7, 4.0}) {
    CoinMatrix expected = CoinMatrix::Zero();
    expected.diagonal() << std::polar(1.0, -k), 1.0, std::polar(1.0, k);
    CHECK(oracle::max_abs(momentum_propagator(identity, k), expected) < 1e-15);
    const CoinMatrix u = momentum_propagator(coin_c1(0.4), k);
    CHECK(oracle::max_abs(u * u.adjoint(), CoinMatrix::Identity()) < 1e-12);
  }
  CHECK_THROWS_AS(momentum_propagator(g, INFINITY), DomainError);
}

TEST_CASE("dispersion table structure") {
  const DispersionTable table = dispersion_numeric(coin_c1(0.5), 512, {.keep_eigenvectors = true});
  REQUIRE(table.size() == 512);
  CHECK(table.k.front() == 0.0);
  CHECK(table.k.back() == doctest::Approx(2.0 * pi * 511.0 / 512.0));
  for (std::size_t s = 0; s < table.size(); ++s) {
    const auto phases = eigenphases(momentum_propagator(coin_c1(0.5), table.k[s]));
    CHECK(phase_set_distance({table.omega[0][s], table.omega[1][s], table.omega[2][s]}, phases) < 1e-10);
    if (s > 0) {
      for (int j = 0; j < 3; ++j) CHECK(std::abs(table.omega[j][s] - table.omega[j][s - 1]) < pi / 4.0);
    }
    const CoinMatrix u = momentum_propagator(coin_c1(0.5), table.k[s]);
    for (int j = 0; j < 3; ++j) {
      const CoinVector& v = (*table.eigenvectors)[j][s];
      CHECK((u * v - std::polar(1.0, table.omega[j][s]) * v).norm() < 1e-10);
    }
  }
  CHECK_THROWS_AS(dispersion_numeric(grover_coin(), 15), DomainError);
}

TEST_CASE("branch tracking failure reports the wavenumber") {
  try {
    dispersion_numeric(grover_coin(), 16, {.branch_jump_threshold = 1e-3});
    FAIL("expected a branch tracking error");
  } catch (const BranchTrackingError& e) {
    CHECK(e.k() > 0.0);
    CHECK(e.k() < 2.0 * pi);
  }
}

TEST_CASE("grover dispersion") {
  const DispersionTable table = dispersion_numeric(grover_coin(), 1024);
  CHECK(max_abs_flat(table) < 1e-10);
  CHECK(max_numeric_analytic_gap(grover_coin(), 1024) < 1e-9);

  const auto at0 = dispersion_analytic(CoinFamily::Grover, std::nullopt, 0.0);
  CHECK(at0[0] == doctest::Approx(pi));
  CHECK(at0[1] == doctest::Approx(-pi));
  CHECK(at0[2] == 0.0);
  const auto at_pi = dispersion_analytic(CoinFamily::Grover, std::nullopt, pi);
  CHECK(at_pi[0] == doctest::Approx(std::acos(-1.0 / 3.0)));
  CHECK(at_pi[1] == doctest::Approx(-std::acos(-1.0 / 3.0)));
}

TEST_CASE("c1 dispersion") {
  const Coin coin = coin_c1(pi / 4.0);
  const DispersionTable table = dispersion_numeric(coin, 1024);
  CHECK(max_abs_flat(table) < 1e-10);
  for (std::size_t s = 0; s < table.size(); ++s) {
    const double a = std::acos(-(2.0 + std::cos(table.k[s])) * std::cos(pi / 4.0) / 3.0);
    const std::array<double, 3> expected{pi / 4.0 + a, pi / 4.0 - a, 0.0};
    CHECK(phase_set_distance({table.omega[0][s], table.omega[1][s], table.omega[2][s]}, expected) < 1e-9);
  }
}

TEST_CASE("c2 dispersion") {
  for (int i = 0; i <= 10; ++i) {
    const double rho = i / 10.0;
    CHECK(max_numeric_analytic_gap(coin_c2(rho), 1024) < 1e-9);
  }
  SUBCASE("rho = 1 gives linear bands") {
    for (double k : {0.4, 1.3, 2.9}) {
      const auto w = dispersion_analytic(CoinFamily::C2, 1.0, k);
      CHECK(w[0] == doctest::Approx(pi - k));
    }
    const DispersionTable table = dispersion_numeric(coin_c2(1.0), 1024);
    for (int j = 0; j < 2; ++j) {
      for (double v : group_velocity(table, j)) CHECK(std::abs(std::abs(v) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("analytic dispersion domain") {
  CHECK_THROWS_AS(dispersion_analytic(CoinFamily::Custom, std::nullopt, 0.1), UnsupportedFamilyError);
  CHECK_THROWS_AS(dispersion_analytic(CoinFamily::C2, 1.5, 0.1), DomainError);
  CHECK_THROWS_AS(dispersion_analytic(CoinFamily::C1, std::nullopt, 0.1), DomainError);
}

TEST_CASE("flat band for every family member") {
  std::vector<Coin> coins{grover_coin()};
  for (int i = 0; i < 10; ++i) coins.push_back(coin_c1(pi / 2.0 * i / 9.0));
  for (int i = 0; i < 10; ++i) coins.push_back(coin_c2(i / 9.0));
  for (const Coin& coin : coins) {
    const DispersionTable table = dispersion_numeric(coin, 4096);
    CHECK(max_abs_flat(table) < 1e-10);
    CHECK(max_numeric_analytic_gap(coin, 4096) < 1e-9);
  }
}

TEST_CASE("group velocity") {
  SUBCASE("flat branch") {
    for (const Coin& coin : {grover_coin(), coin_c1(0.8), coin_c2(0.3)}) {
      for (double v : group_velocity(dispersion_numeric(coin, 1024), kFlatBranch)) CHECK(std::abs(v) < 1e-9);
    }
  }
  SUBCASE("grover maximum") {
    const auto v = group_velocity(dispersion_numeric(grover_coin(), 4096), 1);
    CHECK(std::abs(*std::max_element(v.begin(), v.end()) - kInvSqrt3) < 1e-6);
  }
  SUBCASE("c2(0.5) maximum") {
    const auto v = group_velocity(dispersion_numeric(coin_c2(0.5), 4096), 1);
    CHECK(std::abs(*std::max_element(v.begin(), v.end()) - 0.5) < 1e-6);
  }
  SUBCASE("agrees with Hellmann-Feynman at every sample") {
    const DispersionTable table = dispersion_numeric(coin_c1(0.7), 4096, {.keep_eigenvectors = true});
    for (int j = 0; j < 3; ++j) {
      const auto v = group_velocity(table, j);
      for (std::size_t s = 0; s < table.size(); ++s) {
        CHECK(std::abs(v[s] - oracle::hellmann_feynman_velocity((*table.eigenvectors)[j][s])) < 1e-6);
      }
    }
  }
  SUBCASE("non-uniform grid") {
    DispersionTable table = dispersion_numeric(grover_coin(), 64);
    table.k[10] += 1e-3;
    CHECK_THROWS_AS(group_velocity(table, 0), DomainError);
  }
}

TEST_CASE("stationary point") {
  CHECK(std::abs(stationary_point(dispersion_numeric(grover_coin(), 4096), 1).value()) < 1e-6);
  CHECK(std::abs(stationary_point(dispersion_numeric(grover_coin(), 4096), 0).value()) < 1e-6);
  for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    CHECK(std::abs(stationary_point(dispersion_numeric(coin_c2(rho), 4096), 0).value()) < 1e-6);
  }
  for (double phi : {0.1, pi / 4.0, 1.2}) {
    const DispersionTable table = dispersion_numeric(coin_c1(phi), 4096);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(stationary_point(table, j).value() - stationary_wavenumber_c1(phi)) < 1e-6);
    }
  }
  CHECK_FALSE(stationary_point(dispersion_numeric(grover_coin(), 1024), kFlatBranch).has_value());
  CHECK_FALSE(stationary_point(dispersion_numeric(coin_c2(1.0), 1024), 0).has_value());
  CHECK_THROWS_AS(stationary_point(dispersion_numeric(grover_coin(), 128), 0), DomainError);

  // The closed-form stationary wavenumber zeroes the analytic curvature.
  for (double phi : {0.2, 0.7, 1.3}) {
    const double c = std::cos(phi);
    const double ck = std::cos(stationary_wavenumber_c1(phi));
    CHECK(std::abs(9.0 * ck - c * c * (2.0 + 5.0 * ck + 2.0 * ck * ck)) < 1e-12);
  }
}

TEST_CASE("numeric peak velocities") {
  const auto g = peak_velocities_numeric(grover_coin());
  CHECK(std::abs(g.v_right - kInvSqrt3) < 1e-6);
  CHECK(std::abs(g.v_left + kInvSqrt3) < 1e-6);
  CHECK(g.method == VelocityMethod::Numeric);
  CHECK(std::abs(g.k0.value()) < 1e-6);

  const auto still = peak_velocities_numeric(coin_c1(pi / 2.0));
  CHECK(still.v_right == 0.0);
  CHECK(still.v_left == 0.0);
  CHECK_FALSE(still.k0.has_value());

  const auto fast = peak_velocities_numeric(coin_c2(0.9));
  CHECK(std::abs(fast.v_right - 0.9) < 1e-6);
  CHECK(std::abs(fast.v_left + 0.9) < 1e-6);

  const auto c1 = peak_velocities_numeric(coin_c1(pi / 4.0));
  CHECK(std::abs(c1.k0.value() - stationary_wavenumber_c1(pi / 4.0)) < 1e-6);
}

TEST_CASE("closed-form peak velocities") {
  CHECK(peak_velocity_c1(0.0) == doctest::Approx(kInvSqrt3).epsilon(1e-15));
  CHECK(std::abs(peak_velocity_c1(pi / 2.0)) < 1e-9);
  CHECK(std::abs(peak_velocity_c1(pi / 4.0) - 0.27) < 1e-3);
  CHECK_THROWS_AS(peak_velocity_c1(-0.1), DomainError);
  CHECK_THROWS_AS(peak_velocity_c1(2.0), DomainError);

  CHECK(peak_velocity_c2(0.0) == 0.0);
  CHECK(peak_velocity_c2(kInvSqrt3) == kInvSqrt3);
  CHECK(peak_velocity_c2(0.9) == 0.9);
  CHECK_THROWS_AS(peak_velocity_c2(1.2), DomainError);

  const auto analytic = peak_velocities_analytic(coin_c1(0.3));
  CHECK(analytic.method == VelocityMethod::Analytic);
  CHECK(analytic.v_right == peak_velocity_c1(0.3));
  CHECK(analytic.v_left == -peak_velocity_c1(0.3));
  CHECK(peak_velocities_analytic(trivial_coin_c_prime()).v_right == 1.0);
  CHECK_THROWS_AS(peak_velocities_analytic(custom_coin(CoinMatrix::Identity())), UnsupportedFamilyError);
}

TEST_CASE("linear approximation of the c1 velocity") {
  CHECK(linear_approx_deviation(0.0) == 0.0);
  CHECK(std::abs(linear_approx_deviation(pi / 2.0)) < 1e-9);
  // Dense scan of the closed form; the extremum was pinned by an independent numpy scan.
  double extreme = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double d = linear_approx_deviation(pi / 2.0 * i / 9999.0);
    if (std::abs(d) > std::abs(extreme)) extreme = d;
  }
  CHECK(extreme == doctest::Approx(-0.018411653324759081).epsilon(1e-9));
  CHECK_THROWS_AS(linear_approx_deviation(1.6), DomainError);
}

TEST_CASE("velocity consistency across the families") {
  for (int i = 0; i < 50; ++i) {
    const double phi = pi / 2.0 * i / 49.0;
    const auto r = peak_velocities_numeric(coin_c1(phi));
    CHECK(std::abs(r.v_right - peak_velocity_c1(phi)) < 1e-6);
    CHECK(std::abs(r.v_left + r.v_right) < 1e-10);
    CHECK(r.v_right <= 1.0);
  }
  for (int i = 0; i <= 10; ++i) {
    const double rho = i / 10.0;
    const auto r = peak_velocities_numeric(coin_c2(rho));
    CHECK(std::abs(r.v_right - rho) < 1e-6);
    CHECK(std::abs(r.v_left + r.v_right) < 1e-10);
  }
}

TEST_CASE("grover is the fastest c1 walk") {
  double best = -1.0;
  int argmax = -1;
  for (int i = 0; i <= 2000; ++i) {
    const double v = peak_velocity_c1(pi / 2.0 * i / 2000.0);
    if (v > best) {
      best = v;
      argmax = i;
    }
  }
  CHECK(argmax == 0);
  CHECK(best == doctest::Approx(kInvSqrt3));
}

TEST_CASE("light cone for random coins") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Coin coin = custom_coin(oracle::random_unitary(rng));
    const auto r = peak_velocities_numeric(coin, 1024);
    CHECK(r.v_right <= 1.0 + 1e-9);
    CHECK(r.v_left >= -1.0 - 1e-9);
    CHECK(r.v_left <= r.v_right);
  }
}

TEST_CASE("side peaks follow the front t*v at t = 200") {
  const double s2 = 1.0 / std::sqrt(2.0);
  struct Case {
    std::string name;
    Coin coin;
    CoinState psi;
  };
  const std::vector<Case> cases{{"grover", grover_coin(), CoinState(kInvSqrt3, -kInvSqrt3, kInvSqrt3)},
                                {"c1(pi/4)", coin_c1(pi / 4.0), CoinState(kInvSqrt3, -kInvSqrt3, kInvSqrt3)},
                                {"c2(0.9)", coin_c2(0.9), CoinState(s2, 0.0, s2)}};
  const long t = 200;
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto peaks = side_peaks(probability_distribution(evolve(initial_state(c.psi), c.coin, t)));
    const long predicted = std::lround(t * peak_velocities_numeric(c.coin).v_right);
    CHECK(std::abs(peaks.right - predicted) <= 2);
  }
}
