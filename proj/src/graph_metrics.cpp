#include "icb/graph_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "icb/contact_model.hpp"
#include "icb/sampling.hpp"

namespace icb {

double graph_objective(const ModelParams& p, const Datapoint& d, State x) {
  const double dz = x.z - d.x.z;
  const double dv = x.v - d.x.v;
  const double dy = step_explicit(p, x) - d.y;
  return dz * dz + dv * dv + dy * dy;
}

double state_lipschitz(const ModelParams& p) { return std::sqrt(1.0 / (p.dt * p.dt) + 1.0); }

namespace {

struct Box {
  double z0, z1, v0, v1;
};

struct Incumbent {
  State x;
  double value = std::numeric_limits<double>::infinity();
  void offer(const ModelParams& p, const Datapoint& d, State c) {
    if (!std::isfinite(c.z) || !std::isfinite(c.v)) return;
    const double f = graph_objective(p, d, c);
    if (f < value) {
      value = f;
      x = c;
    }
  }
};

// Graph points constructed from the datapoint itself. All are of the form
// (x, step_explicit(x)), so each is an upper bound on the distance.
std::array<State, 6> constructive_candidates(const ModelParams& p, const Datapoint& d) {
  const double dt = p.dt;
  const double c = p.a_grav * dt;
  const double zi = d.x.z, vi = d.x.v, yi = d.y;
  const double d_v = yi - vi + c;
  const double phi = zi + yi * dt - p.theta;
  const double d_z = neg(phi - d_v * dt);

  // Free-fall plane y = v - c (z free).
  const State freefall_proj{zi, 0.5 * (vi + yi + c)};
  // Contact plane y = (theta - z)/dt (v free).
  const State contact_proj{(zi * dt * dt + p.theta - yi * dt) / (dt * dt + 1.0), vi};
  // Crease z = theta - u*dt, y = u, v = u + c.
  const double u = (dt * (p.theta - zi) + vi - c + yi) / (dt * dt + 2.0);
  const State crease_proj{p.theta - u * dt, u + c};

  return {d.x, State{zi + d_z, vi}, State{zi - phi, vi}, freefall_proj, contact_proj, crease_proj};
}

void scan(const ModelParams& p, const Datapoint& d, double z_lo, double z_hi, double v_lo, double v_hi, int n,
          Incumbent& best) {
  const double hz = (z_hi - z_lo) / (n - 1);
  const double hv = (v_hi - v_lo) / (n - 1);
  const double c = p.a_grav * p.dt;
  double best_val = best.value;
  int bi = -1, bj = -1;
  for (int i = 0; i < n; ++i) {
    const double z = i + 1 == n ? z_hi : z_lo + hz * i;
    const double q = (p.theta - z) / p.dt;
    const double dz2 = (z - d.x.z) * (z - d.x.z);
    for (int j = 0; j < n; ++j) {
      const double v = j + 1 == n ? v_hi : v_lo + hv * j;
      const double base = v - c;
      const double f = base + pos(-base + q);
      const double dv = v - d.x.v;
      const double dy = f - d.y;
      const double val = dz2 + dv * dv + dy * dy;
      if (val < best_val) {
        best_val = val;
        bi = i;
        bj = j;
      }
    }
  }
  if (bi >= 0) {
    const State x{bi + 1 == n ? z_hi : z_lo + hz * bi, bj + 1 == n ? v_hi : v_lo + hv * bj};
    best.offer(p, d, x);
  }
}

}  // namespace

GraphDistanceResult graph_distance(const ModelParams& p, const DomainBounds& b, const Datapoint& d,
                                   const GridConfig& grid) {
  if (!std::isfinite(d.x.z) || !std::isfinite(d.x.v) || !std::isfinite(d.y)) {
    throw std::invalid_argument("graph_distance: datapoint must be finite");
  }
  if (grid.coarse_points < 3) throw std::invalid_argument("graph_distance: coarse_points must be >= 3");
  const double wz = b.z_hi - b.z_lo;
  const double wv = 2.0 * b.v_max;
  Box box{b.z_lo - grid.enlarge * wz, b.z_hi + grid.enlarge * wz, -b.v_max - grid.enlarge * wv,
          b.v_max + grid.enlarge * wv};
  box.z0 = std::min(box.z0, d.x.z);
  box.z1 = std::max(box.z1, d.x.z);
  box.v0 = std::min(box.v0, d.x.v);
  box.v1 = std::max(box.v1, d.x.v);

  Incumbent best;
  if (grid.use_candidates) {
    for (State c : constructive_candidates(p, d)) best.offer(p, d, c);
  }
  const int n = grid.coarse_points;
  scan(p, d, box.z0, box.z1, box.v0, box.v1, n, best);

  double half_z = 0.5 * (box.z1 - box.z0);
  double half_v = 0.5 * (box.v1 - box.v0);
  double res = std::max(box.z1 - box.z0, box.v1 - box.v0) / (n - 1);
  int rounds = 0;
  while (rounds < grid.min_rounds || res > grid.target_resolution) {
    half_z /= grid.shrink;
    half_v /= grid.shrink;
    const double zc = std::clamp(best.x.z, box.z0, box.z1);
    const double vc = std::clamp(best.x.v, box.v0, box.v1);
    scan(p, d, std::max(box.z0, zc - half_z), std::min(box.z1, zc + half_z), std::max(box.v0, vc - half_v),
         std::min(box.v1, vc + half_v), n, best);
    res = 2.0 * std::max(half_z, half_v) / (n - 1);
    ++rounds;
    if (rounds > 64) break;
  }

  GraphDistanceResult out;
  out.nearest_x = best.x;
  out.nearest_y = step_explicit(p, best.x);
  out.distance = std::sqrt(graph_objective(p, d, best.x));
  out.resolution = res;
  out.rounds = rounds;
  const double edge = 2.0 * res;
  out.boundary_hit = best.x.z <= box.z0 + edge || best.x.z >= box.z1 - edge || best.x.v <= box.v0 + edge ||
                     best.x.v >= box.v1 - edge;
  return out;
}

SandwichResult sandwich_check(const ModelParams& p, const DomainBounds& b, const Datapoint& d, double L_f_x,
                              const GridConfig& grid) {
  const GraphDistanceResult gd = graph_distance(p, b, d, grid);
  SandwichResult r;
  r.l_exp = loss_explicit(p, d).value;
  r.d2 = gd.distance * gd.distance;
  r.lower = r.l_exp / (1.0 + L_f_x * L_f_x);
  const double res = std::max(gd.resolution, grid.target_resolution);
  r.slack = 2.0 * gd.distance * res + res * res;
  r.upper_margin = r.l_exp - r.d2;
  r.lower_margin = r.d2 - r.lower;
  if (r.upper_margin < -r.slack) {
    r.failed_side = "upper";
  } else if (r.lower_margin < -r.slack) {
    r.failed_side = "lower";
  }
  r.passed = r.failed_side.empty();
  return r;
}

double on_graph_tolerance(const ModelParams& p, const Datapoint& d, Epsilon eps, double lambda_star) {
  constexpr double u = std::numeric_limits<double>::epsilon();
  const double gap_err =
      8.0 * u * (std::abs(d.x.z) + std::abs(p.theta) + (std::abs(d.y) + std::abs(d.x.v) + std::abs(lambda_star) / p.mass) * p.dt);
  const double vel_err = 8.0 * u * (std::abs(d.y) + std::abs(d.x.v) + p.a_grav * p.dt + std::abs(lambda_star) / p.mass);
  return 1e-18 + gap_err * std::abs(lambda_star) / eps.value() + gap_err * gap_err / eps.value() + vel_err * vel_err;
}

ZeroSetReport zero_set_check(const ModelParams& p, const DomainBounds& b, Epsilon eps, std::size_t samples,
                             std::uint64_t seed, const GridConfig& grid) {
  if (samples < 1) throw std::invalid_argument("zero_set_check: samples must be >= 1");
  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<ZeroSetReport> partial(blocks);
  for_each_block(samples, seed, [&](std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    ZeroSetReport& r = partial[begin / kSampleBlock];
    r.off_graph_floor = std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
      ++r.samples;
      if (i % 2 == 0) {
        const State x = (i % 4 == 0) ? sample_state(rng, b) : sample_contact_state(rng, p, b);
        const Datapoint d{x, step_explicit(p, x)};
        const LossEval e = loss_violation(p, d, eps, b.b_lambda);
        const double tol = on_graph_tolerance(p, d, eps, e.lambda_star);
        ++r.on_graph;
        r.on_graph_max_loss = std::max(r.on_graph_max_loss, e.value);
        r.on_graph_tolerance = std::max(r.on_graph_tolerance, tol);
        if (e.value > tol || e.value < 0.0) r.violations.push_back(d);
        continue;
      }
      const Datapoint d = sample_mixed_datapoint(rng, p, b);
      const LossEval e = loss_violation(p, d, eps, b.b_lambda);
      if (e.value < 0.0) {
        r.violations.push_back(d);
        continue;
      }
      const GraphDistanceResult gd = graph_distance(p, b, d, grid);
      if (gd.distance >= 0.01) {
        ++r.off_graph;
        r.off_graph_floor = std::min(r.off_graph_floor, e.value);
        if (!(e.value > 0.0)) r.violations.push_back(d);
      }
    }
  });
  ZeroSetReport out;
  out.off_graph_floor = std::numeric_limits<double>::infinity();
  for (const ZeroSetReport& r : partial) {
    out.samples += r.samples;
    out.on_graph += r.on_graph;
    out.off_graph += r.off_graph;
    out.on_graph_max_loss = std::max(out.on_graph_max_loss, r.on_graph_max_loss);
    out.on_graph_tolerance = std::max(out.on_graph_tolerance, r.on_graph_tolerance);
    out.off_graph_floor = std::min(out.off_graph_floor, r.off_graph_floor);
    out.violations.insert(out.violations.end(), r.violations.begin(), r.violations.end());
  }
  if (out.off_graph == 0) out.off_graph_floor = 0.0;
  return out;
}

double qg_modulus(const ModelParams& p, Epsilon eps) {
  const double m2 = p.mass * p.mass;
  const double e = eps.value();
  const double two_dt = 2.0 * p.dt;
  return std::min({m2 / (0.5 * m2 + e), 2.0 / (1.0 + two_dt * two_dt), 1.0 / (4.0 * e), 0.5 * m2 / e});
}

Epsilon epsilon_select(const ModelParams& p) {
  p.validate();
  return Epsilon(std::min(0.25, 0.5 * p.mass * p.mass));
}

QGCertificate qg_verify(const ModelParams& p, const DomainBounds& b, Epsilon eps, std::size_t samples,
                        std::uint64_t seed, const GridConfig& grid) {
  if (p.dt > 0.5) throw std::invalid_argument("qg_verify: requires dt <= 1/2");
  if (samples < 1) throw std::invalid_argument("qg_verify: samples must be >= 1");
  const double mu = qg_modulus(p, eps);
  const double r = grid.target_resolution;

  struct Partial {
    double worst = 0.0, sum_d2 = 0.0, sum_l = 0.0, res = 0.0;
    std::size_t inconclusive = 0;
    std::vector<QGViolation> violations;
  };
  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<Partial> partial(blocks);
  for_each_block(samples, seed, [&](std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    Partial& acc = partial[begin / kSampleBlock];
    for (std::size_t i = begin; i < end; ++i) {
      const Datapoint d = sample_mixed_datapoint(rng, p, b);
      const double l = loss_violation(p, d, eps, b.b_lambda).value;
      const GraphDistanceResult gd = graph_distance(p, b, d, grid);
      const double d2 = gd.distance * gd.distance;
      const double slack = 2.0 * gd.distance * r + r * r;
      acc.sum_d2 += d2;
      acc.sum_l += l;
      acc.res = std::max(acc.res, gd.resolution);
      if (l > 0.0) acc.worst = std::max(acc.worst, 0.5 * mu * d2 / l);
      if (d2 > 2.0 / mu * l + slack) {
        if (gd.boundary_hit) {
          ++acc.inconclusive;
        } else {
          acc.violations.push_back({d, d2, l, slack});
        }
      }
    }
  });

  QGCertificate cert;
  cert.mu = mu;
  cert.eps = eps.value();
  cert.samples = samples;
  double sum_d2 = 0.0, sum_l = 0.0;
  for (const Partial& a : partial) {
    cert.worst_ratio = std::max(cert.worst_ratio, a.worst);
    sum_d2 += a.sum_d2;
    sum_l += a.sum_l;
    cert.resolution = std::max(cert.resolution, a.res);
    cert.inconclusive += a.inconclusive;
    cert.violations.insert(cert.violations.end(), a.violations.begin(), a.violations.end());
  }
  cert.mean_d2 = sum_d2 / static_cast<double>(samples);
  cert.mean_l_vimp = sum_l / static_cast<double>(samples);
  return cert;
}

}  // namespace icb
