#include <cmath>
#include <random>

#include "doctest.h"
#include "icb/contact_model.hpp"
#include "icb/graph_metrics.hpp"
#include "icb/sampling.hpp"
#include "oracle/oracles.hpp"

using namespace icb;
using doctest::Approx;

namespace {
const ModelParams kP;
const DomainBounds kB = DomainBounds::from_params(kP);

double oracle_distance(const Datapoint& d) {
  const double wz = kB.z_hi - kB.z_lo, wv = 2 * kB.v_max;
  return std::sqrt(oracle::graph_distance2(kP, d, std::min(kB.z_lo - 0.2 * wz, d.x.z),
                                           std::max(kB.z_hi + 0.2 * wz, d.x.z), std::min(-kB.v_max - 0.2 * wv, d.x.v),
                                           std::max(kB.v_max + 0.2 * wv, d.x.v)));
}
}  // namespace

TEST_CASE("graph_distance reference points") {
  SUBCASE("on the graph") {
    const Datapoint d{{1.0, 0.0}, -0.04905};
    const GraphDistanceResult r = graph_distance(kP, kB, d);
    CHECK(r.distance <= r.resolution);
    CHECK(r.resolution <= 1e-6);
  }
  SUBCASE("above the free-fall plane") {
    const Datapoint d{{1.0, 0.0}, -0.04905 + 0.1};
    const GraphDistanceResult r = graph_distance(kP, kB, d);
    CHECK(r.distance == Approx(0.1 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.nearest_y == step_explicit(kP, r.nearest_x));
    CHECK(!r.boundary_hit);
  }
  SUBCASE("stiff region") {
    const Datapoint d{{0.0, -15.0}, 0.1};
    const GraphDistanceResult r = graph_distance(kP, kB, d);
    const double l_exp = loss_explicit(kP, d).value;
    CHECK(r.distance * r.distance < l_exp);
    const double L = state_lipschitz(kP);
    CHECK(r.distance * r.distance >= l_exp / (1.0 + L * L));
    CHECK(r.distance == Approx(oracle_distance(d)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(graph_distance(kP, kB, {{NAN, 0.0}, 0.0}), std::invalid_argument);
}

TEST_CASE("graph_distance against the piecewise oracle") {
  const auto pts = mixed_datapoints(kP, kB, 150, 31);
  for (const Datapoint& d : pts) {
    const GraphDistanceResult r = graph_distance(kP, kB, d);
    const double o = oracle_distance(d);
    CHECK(std::abs(r.distance - o) <= 2e-6);
    CHECK(std::sqrt(graph_objective(kP, d, r.nearest_x)) == Approx(r.distance).epsilon(1e-15));
  }
}

TEST_CASE("refinement never increases the distance") {
  const auto pts = mixed_datapoints(kP, kB, 200, 32);
  for (const Datapoint& d : pts) {
    double prev = INFINITY;
    for (int rounds : {0, 1, 2, 3, 5}) {
      GridConfig g;
      g.min_rounds = rounds;
      g.target_resolution = 1.0;  // stop at min_rounds
      const double dist = graph_distance(kP, kB, d, g).distance;
      CHECK(dist <= prev);
      prev = dist;
    }
  }
}

TEST_CASE("graph points are at distance zero") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const State x = i % 2 ? sample_state(rng, kB) : sample_contact_state(rng, kP, kB);
    const GraphDistanceResult r = graph_distance(kP, kB, {x, step_explicit(kP, x)});
    CHECK(r.distance <= r.resolution);
  }
}

TEST_CASE("sandwich check") {
  const double L = state_lipschitz(kP);
  CHECK(L == Approx(std::sqrt(1.0 / (kP.dt * kP.dt) + 1.0)));
  const SandwichResult on = sandwich_check(kP, kB, {{1.0, 0.0}, -0.04905}, L);
  CHECK(on.passed);
  const SandwichResult ff = sandwich_check(kP, kB, {{1.0, 0.0}, 0.05095}, L);
  CHECK(ff.passed);
  CHECK(ff.l_exp == Approx(0.01));
  CHECK(ff.d2 == Approx(0.005).epsilon(1e-8));
  // a Lipschitz constant that is too small breaks the lower side in the stiff region
  const SandwichResult bad = sandwich_check(kP, kB, {{0.0, -15.0}, 0.1}, 0.0);
  CHECK(!bad.passed);
  CHECK(bad.failed_side == "lower");
  for (const Datapoint& d : mixed_datapoints(kP, kB, 1000, 41)) CHECK(sandwich_check(kP, kB, d, L).passed);
}

TEST_CASE("zero set") {
  const ZeroSetReport z = zero_set_check(kP, kB, Epsilon(0.25), 4000, 5);
  CHECK(z.passed());
  CHECK(z.on_graph == 2000);
  CHECK(z.off_graph > 0);
  CHECK(z.off_graph_floor > 0.0);
  CHECK(z.on_graph_max_loss <= z.on_graph_tolerance);
  CHECK(z.on_graph_tolerance < 1e-12);
}

TEST_CASE("qg_modulus and epsilon_select") {
  CHECK(qg_modulus(kP, Epsilon(0.25)) == 1.0);
  CHECK(qg_modulus(kP, Epsilon(0.5)) == 0.5);
  CHECK(qg_modulus(kP, Epsilon(10.0)) == Approx(0.025).epsilon(1e-15));
  CHECK(qg_modulus(kP, Epsilon(1e12)) < 1e-11);
  CHECK(qg_modulus(kP, Epsilon(1e-12)) == Approx(2.0 / (1.0 + 0.01 * 0.01)).epsilon(1e-9));
  for (double e : {1e-3, 0.1, 0.25, 1.0, 100.0}) {
    const double mu = qg_modulus(kP, Epsilon(e));
    CHECK(mu > 0.0);
    CHECK(mu < 2.0);
  }
  CHECK(epsilon_select(kP).value() == 0.25);
  ModelParams half;
  half.mass = 0.5;
  CHECK(epsilon_select(half).value() == 0.125);
  ModelParams heavy;
  heavy.mass = 1e6;
  CHECK(epsilon_select(heavy).value() == 0.25);
}

TEST_CASE("qg certificate") {
  for (double e : {0.1, 0.25, 0.5, 10.0}) {
    const QGCertificate c = qg_verify(kP, kB, Epsilon(e), 2000, 9);
    CHECK(c.passed());
    CHECK(c.mu == qg_modulus(kP, Epsilon(e)));
    CHECK(c.worst_ratio <= 1.0 + 1e-6);
    CHECK(c.mean_d2 <= 2.0 / c.mu * c.mean_l_vimp);
  }
  // on-graph data only
  ModelParams coarse = kP;
  coarse.dt = 0.6;
  CHECK_THROWS_AS(qg_verify(coarse, DomainBounds::from_params(coarse), Epsilon(0.25), 10, 1), std::invalid_argument);
}

TEST_CASE("contact witness in the positive-impulse, positive-gap case") {
  // Here the free-fall witness (z + d_z, v) can sit far from the graph; moving
  // z down by phi' lands on the contact branch at exactly y.
  const Epsilon eps(0.25);
  const double mu = qg_modulus(kP, eps);
  std::mt19937_64 rng(77);
  int seen = 0;
  for (int i = 0; i < 200000 && seen < 500; ++i) {
    const Datapoint d = sample_mixed_datapoint(rng, kP, kB);
    const LossEval e = loss_violation(kP, d, eps, kB.b_lambda);
    if (!(e.lambda_star > 0.0 && e.phi_end > 0.0)) continue;
    ++seen;
    const State w{d.x.z - e.phi_end, d.x.v};
    CHECK(contact_slack(kP, w) > 0.0);
    const double d2 = graph_objective(kP, d, w);
    CHECK(std::abs(d2 - e.phi_end * e.phi_end) <= 1e-6 * e.phi_end * e.phi_end + 1e-24);
    CHECK(0.5 * mu * d2 <= e.value * (1.0 + 1e-9) + 1e-15);
  }
  CHECK(seen > 0);
}
