#include <cmath>
#include <random>

#include "doctest.h"
#include "icb/contact_model.hpp"
#include "icb/losses.hpp"
#include "icb/sampling.hpp"
#include "icb/scalar_minimize.hpp"
#include "oracle/oracles.hpp"

using namespace icb;
using doctest::Approx;

TEST_CASE("step_explicit at the three reference states") {
  const ModelParams p;
  CHECK(step_explicit(p, {0.0, 0.0}) == 0.0);
  CHECK(step_explicit(p, {1.0, 0.0}) == Approx(-0.04905).epsilon(1e-15));
  CHECK(step_explicit(p, {0.05, -15.0}) == Approx(-10.0).epsilon(1e-13));
}

TEST_CASE("g_eval") {
  ModelParams p;
  CHECK(g_eval(p, {1.0, 0.0}, 0.0) == Approx(-0.04905).epsilon(1e-15));
  CHECK(g_eval(p, {1.0, 0.0}, 1.0) == Approx(0.95095).epsilon(1e-15));
  p.mass = 2.0;
  CHECK(g_eval(p, {3.0, 5.0}, -1.0) == Approx(4.45095).epsilon(1e-15));
}

TEST_CASE("h_eval") {
  const ModelParams p;
  CHECK(h_eval(p, {0.0, 0.0}, 0.0, 0.5) == 0.0);
  CHECK(h_eval(p, {0.0, 0.0}, -1.0, 0.0) == Approx(1.25e-5).epsilon(1e-14));
  CHECK(h_eval(p, {0.0, 0.0}, 0.0, -2.0) == 2.0);
}

TEST_CASE("simulate_trajectory") {
  const ModelParams p;
  SUBCASE("resting state is a fixed point") {
    const auto traj = simulate_trajectory(p, {0.0, 0.0}, 5);
    REQUIRE(traj.size() == 6);
    for (const State& s : traj) CHECK(s == State{0.0, 0.0});
  }
  SUBCASE("one free-fall step") {
    const auto traj = simulate_trajectory(p, {1.0, 0.0}, 1);
    REQUIRE(traj.size() == 2);
    CHECK(traj[1].z == Approx(0.99975475).epsilon(1e-14));
    CHECK(traj[1].v == Approx(-0.04905).epsilon(1e-14));
  }
  SUBCASE("impact lands on the ground then rests") {
    const auto traj = simulate_trajectory(p, {0.05, -15.0}, 2);
    REQUIRE(traj.size() == 3);
    CHECK(std::abs(traj[1].z) <= 1e-15);
    CHECK(std::abs(traj[2].v) <= 1e-12);
  }
  CHECK_THROWS_AS(simulate_trajectory(p, {0.0, 0.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_trajectory(p, {NAN, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("ModelParams and DomainBounds validation") {
  ModelParams p;
  p.mass = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.dt = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  const DomainBounds b = DomainBounds::from_params(ModelParams{});
  CHECK(b.lambda_max == Approx(15.04905).epsilon(1e-15));
  CHECK(b.b_lambda >= b.lambda_max);
  CHECK(b.z_lo == Approx(-0.1));
  CHECK(b.z_hi == Approx(8.0 - 15.0 * 0.005));
  const DomainBounds given = DomainBounds::from_params(ModelParams{}, 8.0, 15.0, 8.0, 0.1, 0.0, 15.05);
  CHECK(given.lambda_max == 15.05);
  ModelParams m2;
  m2.mass = 2.0;
  m2.dt = 0.01;
  CHECK(DomainBounds::from_params(m2).lambda_max == Approx(30.1962).epsilon(1e-14));
}

TEST_CASE("step_explicit agrees with an independent max form") {
  const ModelParams p;
  const DomainBounds b = DomainBounds::from_params(p);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const State x = i % 2 ? sample_state(rng, b) : sample_contact_state(rng, p, b);
    CHECK(step_explicit(p, x) == Approx(oracle::f(p, x.z, x.v)).epsilon(1e-12));
  }
}

TEST_CASE("properties over sampled states") {
  const ModelParams p;
  const DomainBounds b = DomainBounds::from_params(p);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const State x = i % 2 ? sample_state(rng, b) : sample_contact_state(rng, p, b);
    const double lam = uniform(rng, -b.lambda_max, b.lambda_max);
    const double y = uniform(rng, -b.v_max, b.v_max);
    CHECK(h_eval(p, x, y, lam) >= 0.0);
    // no penetration at the end of the step
    CHECK(end_gap(p, x, step_explicit(p, x)) >= -1e-12);
    // f agrees with g at the generic minimizer of h(x, g(x, lambda), lambda)
    const ScalarMinimum m = scalar_minimize(
        [&](double l) { return h_eval(p, x, g_eval(p, x, l), l); }, -b.b_lambda, b.b_lambda);
    CHECK(std::abs(g_eval(p, x, m.argmin) - step_explicit(p, x)) <= 1e-8);
  }
}

TEST_CASE("one-sided theta slopes of step_explicit stay below 1/dt") {
  const ModelParams p;
  const DomainBounds b = DomainBounds::from_params(p);
  std::mt19937_64 rng(3);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const State x = i % 2 ? sample_state(rng, b) : sample_contact_state(rng, p, b);
    const double theta = uniform(rng, -0.1, 0.1);
    const double s =
        std::abs(step_explicit(p.with_theta(theta + h), x) - step_explicit(p.with_theta(theta), x)) / h;
    worst = std::max(worst, s);
  }
  CHECK(worst <= 1.0 / p.dt + 1e-6);
  CHECK(worst > 0.5 / p.dt);
}
