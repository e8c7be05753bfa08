#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icb/losses.hpp"
#include "icb/model.hpp"

namespace icb {

/// Grid schedule for the graph-distance search over x = (z, v).
struct GridConfig {
  int coarse_points = 201;         // per axis
  int min_rounds = 5;              // refinement rounds, each shrinking the window by `shrink`
  double shrink = 10.0;
  double target_resolution = 1e-6; // extra rounds are added until the cell size reaches this
  double enlarge = 0.2;            // search box = data box widened by this fraction per side
  bool use_candidates = true;      // seed with constructive graph points before refining
};

struct GraphDistanceResult {
  double distance = 0.0;
  State nearest_x;
  double nearest_y = 0.0;  // == step_explicit(nearest_x)
  double resolution = 0.0; // final grid cell size (max over axes)
  int rounds = 0;
  bool boundary_hit = false;  // minimizer on the search-box edge; result inconclusive
};

/// Euclidean distance from (z_i, v_i, y_i) to the graph of step_explicit,
/// weighting all three coordinates equally. Coarse grid, then windowed
/// refinement around the incumbent. With use_candidates the search is also
/// seeded with graph points built from the datapoint: its own state, the
/// free-fall and contact witnesses, and the orthogonal projections onto the
/// free-fall plane, the contact plane, and their crease line.
GraphDistanceResult graph_distance(const ModelParams& p, const DomainBounds& b, const Datapoint& d,
                                   const GridConfig& grid = {});

/// Squared norm of (x - d.x, step_explicit(x) - d.y).
double graph_objective(const ModelParams& p, const Datapoint& d, State x);

/// Sup of the Jacobian norm of step_explicit in x, sqrt(1/dt^2 + 1).
double state_lipschitz(const ModelParams& p);

struct SandwichResult {
  double l_exp = 0.0;
  double d2 = 0.0;
  double lower = 0.0;        // l_exp / (1 + L^2)
  double slack = 0.0;        // 2*d*r + r^2
  double upper_margin = 0.0; // l_exp - d2
  double lower_margin = 0.0; // d2 - lower
  bool passed = false;
  std::string failed_side;   // "", "upper", "lower"
};

/// Checks l_exp >= d^2 >= l_exp / (1 + L^2) within oracle slack.
SandwichResult sandwich_check(const ModelParams& p, const DomainBounds& b, const Datapoint& d, double L_f_x,
                              const GridConfig& grid = {});

struct ZeroSetReport {
  std::size_t samples = 0;
  std::size_t on_graph = 0;
  std::size_t off_graph = 0;        // graph distance >= 0.01
  double on_graph_max_loss = 0.0;
  double on_graph_tolerance = 0.0;
  double off_graph_floor = 0.0;     // smallest loss among off-graph samples
  std::vector<Datapoint> violations;
  bool passed() const { return violations.empty(); }
};

/// Rounding-level tolerance for the violation loss at an exactly simulated
/// graph point. The end gap of such a point is only zero up to a few ulps of
/// |z| + |theta| + (|y| + |v| + |lambda*|/m) dt, and that residue is multiplied
/// by lambda*/eps.
double on_graph_tolerance(const ModelParams& p, const Datapoint& d, Epsilon eps, double lambda_star);

/// The violation loss vanishes on the graph and is strictly positive away from
/// it. Half the samples are graph points, half come from the mixed sampler.
ZeroSetReport zero_set_check(const ModelParams& p, const DomainBounds& b, Epsilon eps, std::size_t samples,
                             std::uint64_t seed, const GridConfig& grid = {});

/// min(m^2/(m^2/2 + eps), 2/(1 + (2 dt)^2), 1/(4 eps), (m^2/2)/eps).
double qg_modulus(const ModelParams& p, Epsilon eps);

/// min(1/4, m^2/2).
Epsilon epsilon_select(const ModelParams& p);

struct QGViolation {
  Datapoint datapoint;
  double d2 = 0.0;
  double l_vimp = 0.0;
  double slack = 0.0;
};

struct QGCertificate {
  double mu = 0.0;
  double eps = 0.0;
  std::size_t samples = 0;
  double worst_ratio = 0.0;   // max (mu/2) d^2 / l_vimp over samples with l_vimp > 0
  double mean_d2 = 0.0;
  double mean_l_vimp = 0.0;
  std::size_t inconclusive = 0;  // oracle minimizer on the search-box edge
  double resolution = 0.0;
  std::vector<QGViolation> violations;
  bool passed() const { return violations.empty() && inconclusive == 0 && mean_d2 <= 2.0 / mu * mean_l_vimp + 1e-12; }
};

/// Checks d^2 <= (2/mu) l_vimp + (2 d r + r^2) on mixed samples, mu from
/// qg_modulus. Requires dt <= 1/2.
QGCertificate qg_verify(const ModelParams& p, const DomainBounds& b, Epsilon eps, std::size_t samples,
                        std::uint64_t seed, const GridConfig& grid = {});

}  // namespace icb
