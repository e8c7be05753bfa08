#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icb/losses.hpp"
#include "icb/model.hpp"

namespace icb {

/// Lipschitz constants of the toy system in closed form.
struct LipschitzTable {
  double L_f_theta = 0.0;
  double L_g_lambda = 0.0;
  double L_g_theta = 0.0;
  double L_h_lambda = 0.0;
  double L_h_theta = 0.0;
  double L_lambda_theta_nimp = 0.0;
  double L_lambda_theta_vimp = 0.0;
};

/// Suprema of the model functions and of the three losses over the domain.
struct LossBounds {
  double B_exp = 0.0;
  double B_nimp = 0.0;
  double B_vimp = 0.0;
  double B_f = 0.0;
  double B_g = 0.0;
  double B_h = 0.0;
};

/// Loss Lipschitz constants w.r.t. theta, in the toy closed form and in the
/// general form built from a LipschitzTable. The two agree whenever
/// lambda_max >= phi_max.
struct LossLipschitz {
  double exp_theta = 0.0;
  double nimp_theta = 0.0;
  double vimp_theta = 0.0;
  double exp_theta_general = 0.0;
  double nimp_theta_general = 0.0;
  double vimp_theta_general = 0.0;

  double for_kind(LossKind kind) const;
};

struct BoundInputs {
  double delta = 0.05;
  double n = 1.0;
  double k = 1.0;
  double b_theta = 1.0;
  double L_loss_theta = 0.0;
  double B_loss = 0.0;

  /// 0 < delta <= 1, n >= 1, k >= 1, nonnegative constants.
  void validate() const;
};

LipschitzTable lipschitz_table(const ModelParams& p, const DomainBounds& b, Epsilon eps);

/// Implicit-function sensitivity d(lambda*)/d(theta) = -h_ll^{-1} h_tl for a
/// scalar impulse. Throws NumericalError if |h_ll| < 1e-12.
double lambda_sensitivity(double h_lambda_lambda, double h_theta_lambda);

LossLipschitz loss_lipschitz(const ModelParams& p, const DomainBounds& b, const LipschitzTable& table,
                             const LossBounds& loss_bounds, Epsilon eps);

/// Conservative analytic suprema:
///   B_f = B_g = max(v_max + a*dt + lambda_max/m, penetration/dt)
///   B_exp = B_nimp = (v_max + B_f)^2
///   B_h = max(phi^2/2, lambda_max^2/2, phi*lambda_max), phi = max(phi_max, penetration + v_max*dt)
///   B_vimp = B_nimp + B_h/eps
LossBounds loss_suprema(const ModelParams& p, const DomainBounds& b, Epsilon eps);

/// Monte-Carlo maxima over the supremum domain: x in the data box, y uniform in
/// [-v_max, v_max], lambda uniform in [-lambda_max, lambda_max], theta at its
/// true value. B_vimp uses the full impulse set [-b_lambda, b_lambda].
LossBounds empirical_suprema(const ModelParams& p, const DomainBounds& b, Epsilon eps, std::size_t samples,
                             std::uint64_t seed);

/// 44 * L * B_theta * sqrt(k/n) + B * sqrt(log(1/delta) / (2n)).
double generalization_bound(const BoundInputs& in);

enum class SweepKind { DatasetSize, FailureProbability };

struct BoundCurveRow {
  double sweep_value = 0.0;
  double bound_exp = 0.0;
  double bound_nimp = 0.0;
  double bound_vimp = 0.0;
};

/// Bound per approach at each sweep value; the swept field (n or delta) of
/// each template is overwritten.
std::vector<BoundCurveRow> bound_curve(SweepKind kind, std::span<const double> values, const BoundInputs& exp,
                                       const BoundInputs& nimp, const BoundInputs& vimp);

/// BoundInputs for one approach from the closed-form constants.
BoundInputs approach_inputs(LossKind kind, const LossLipschitz& lip, const LossBounds& lb, double b_theta,
                            double delta, double n, double k = 1.0);

struct SlopeViolation {
  Datapoint datapoint;
  double theta = 0.0;
  double slope = 0.0;
};

struct SlopeReport {
  LossKind kind = LossKind::Explicit;
  double bound = 0.0;                  // closed-form L_loss,theta
  double max_slope = 0.0;              // over all samples
  double max_same_branch_slope = 0.0;  // samples whose branch is unchanged across the step
  std::size_t same_branch_samples = 0;
  std::vector<SlopeViolation> violations;  // slope > bound * (1 + 1e-3)
};

struct LipschitzValidation {
  std::size_t samples = 0;
  double step = 1e-6;
  std::vector<SlopeReport> reports;  // explicit, naive implicit, violation implicit
  bool passed() const;
};

/// Finite-difference slopes |l(theta + step) - l(theta)| / step over seeded
/// samples (mixed datapoints, theta within +-0.1 of the true value), compared
/// with the closed-form loss Lipschitz constants.
LipschitzValidation lipschitz_validate(const ModelParams& p, const DomainBounds& b, Epsilon eps,
                                       std::size_t samples, std::uint64_t seed, double step = 1e-6);

}  // namespace icb
