#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "icb/model.hpp"
#include "icb/scalar_minimize.hpp"

namespace icb {

enum class LossKind { Explicit, NaiveImplicit, ViolationImplicit };

std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

/// Which piece of the piecewise objective was active at the minimizer.
enum class Branch { LambdaNegative, LambdaZero, LambdaPositive, FreeFall, Contact };

std::string_view to_string(Branch branch);

/// A loss value at one datapoint together with its minimizing impulse and the
/// intermediates d_v = y - v + a*dt, phi' = z + y*dt - theta,
/// d_z = neg(phi' - d_v*dt), d_z' = -phi'.
struct LossEval {
  double value = 0.0;
  double lambda_star = 0.0;
  Branch branch = Branch::FreeFall;
  double d_v = 0.0;
  double phi_end = 0.0;
  double d_z = 0.0;
  double d_z_prime = 0.0;
};

/// Squared prediction error of the explicit time-stepping map.
LossEval loss_explicit(const ModelParams& p, const Datapoint& d);

/// Prediction error of g at the impulse minimizing h(x, g(x, lambda), lambda)
/// over [-b_lambda, b_lambda]. The inner problem is solved from the per-region
/// stationary points of h; each candidate is clamped to the impulse set and
/// the one with the smallest true h wins.
LossEval loss_naive_implicit(const ModelParams& p, const Datapoint& d, double b_lambda);

/// Same loss with the inner problem handed to scalar_minimize. Used to validate
/// the closed form; throws NumericalError if the solver fails.
LossEval loss_naive_implicit_numeric(const ModelParams& p, const Datapoint& d, double b_lambda,
                                     const ScalarMinimizeOptions& opts = {});

/// Objective of the violation-implicit loss at a fixed impulse:
/// (y - g(x, lambda))^2 + h(x, y, lambda) / eps.
double violation_objective(const ModelParams& p, const Datapoint& d, Epsilon eps, double lambda);

/// Violation-implicit loss. Evaluates the three sign-region candidates (each
/// clamped to its region and to [-b_lambda, b_lambda]) on the true objective
/// and returns the smallest.
LossEval loss_violation(const ModelParams& p, const Datapoint& d, Epsilon eps, double b_lambda);

/// Violation-implicit loss through scalar_minimize over the impulse set.
LossEval loss_violation_numeric(const ModelParams& p, const Datapoint& d, Epsilon eps, double b_lambda,
                                const ScalarMinimizeOptions& opts = {});

/// Dispatch on kind. eps is ignored for the prediction losses.
LossEval evaluate_loss(LossKind kind, const ModelParams& p, const Datapoint& d, Epsilon eps, double b_lambda);

/// Mean loss over data.
double mean_loss(LossKind kind, const ModelParams& p, std::span<const Datapoint> data, Epsilon eps,
                 double b_lambda);

struct LandscapeRow {
  double theta = 0.0;
  double mean_loss = 0.0;
};

/// Mean loss over data at each theta in the grid. Inner-solver failures are
/// rethrown as NumericalError naming the offending theta.
std::vector<LandscapeRow> loss_landscape(const ModelParams& p, std::span<const double> thetas,
                                         std::span<const Datapoint> data, LossKind kind, Epsilon eps,
                                         double b_lambda);

}  // namespace icb
