#include "icb/losses.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "icb/contact_model.hpp"

namespace icb {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Explicit: return "explicit";
    case LossKind::NaiveImplicit: return "naive_implicit";
    case LossKind::ViolationImplicit: return "violation_implicit";
  }
  return "unknown";
}

LossKind loss_kind_from_string(std::string_view name) {
  if (name == "explicit" || name == "exp") return LossKind::Explicit;
  if (name == "naive_implicit" || name == "nimp") return LossKind::NaiveImplicit;
  if (name == "violation_implicit" || name == "vimp") return LossKind::ViolationImplicit;
  throw ConfigError("unknown loss kind '" + std::string(name) + "'");
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::LambdaNegative: return "lambda-negative";
    case Branch::LambdaZero: return "lambda-zero";
    case Branch::LambdaPositive: return "lambda-positive";
    case Branch::FreeFall: return "freefall";
    case Branch::Contact: return "contact";
  }
  return "unknown";
}

namespace {

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

LossEval with_intermediates(const ModelParams& p, const Datapoint& d, LossEval e) {
  e.d_v = d.y - d.x.v + p.a_grav * p.dt;
  e.phi_end = end_gap(p, d.x, d.y);
  e.d_z = neg(e.phi_end - e.d_v * p.dt);
  e.d_z_prime = -e.phi_end;
  return e;
}

double naive_inner(const ModelParams& p, State x, double lambda) {
  return h_eval(p, x, g_eval(p, x, lambda), lambda);
}

LossEval finish_prediction(const ModelParams& p, const Datapoint& d, double lambda) {
  const double r = d.y - g_eval(p, d.x, lambda);
  LossEval e;
  e.value = r * r;
  e.lambda_star = lambda;
  e.branch = lambda > 0.0 ? Branch::Contact : Branch::FreeFall;
  return with_intermediates(p, d, e);
}

LossEval finish_violation(const ModelParams& p, const Datapoint& d, double lambda, double value) {
  LossEval e;
  e.value = value;
  e.lambda_star = lambda;
  e.branch = lambda < 0.0 ? Branch::LambdaNegative : (lambda > 0.0 ? Branch::LambdaPositive : Branch::LambdaZero);
  return with_intermediates(p, d, e);
}

}  // namespace

LossEval loss_explicit(const ModelParams& p, const Datapoint& d) {
  const double f = step_explicit(p, d.x);
  const double r = d.y - f;
  LossEval e;
  e.value = r * r;
  e.lambda_star = contact_impulse(p, d.x);
  e.branch = contact_slack(p, d.x) > 0.0 ? Branch::Contact : Branch::FreeFall;
  return with_intermediates(p, d, e);
}

LossEval loss_naive_implicit(const ModelParams& p, const Datapoint& d, double b_lambda) {
  const double m = p.mass;
  const double dt = p.dt;
  const double slack = contact_slack(p, d.x);  // phi at zero impulse is -dt*slack
  const double phi_free = -dt * slack;
  // Stationary points of h along lambda, one per sign region of (lambda, phi):
  // phi == 0 (lambda > 0, phi < 0), lambda == 0 (lambda < 0, phi > 0),
  // the quadratic region (lambda < 0, phi < 0) and the bilinear region.
  const std::array<double, 6> candidates = {
      m * slack,
      0.0,
      -m * dt * phi_free / (m * m + dt * dt),
      0.5 * m * slack,
      -b_lambda,
      b_lambda,
  };
  double best_lambda = 0.0;
  double best_h = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    const double lam = clamp(c, -b_lambda, b_lambda);
    const double h = naive_inner(p, d.x, lam);
    if (h < best_h) {
      best_h = h;
      best_lambda = lam;
    }
  }
  if (!std::isfinite(best_h)) throw NumericalError("loss_naive_implicit: nonfinite inner objective");
  return finish_prediction(p, d, best_lambda);
}

LossEval loss_naive_implicit_numeric(const ModelParams& p, const Datapoint& d, double b_lambda,
                                     const ScalarMinimizeOptions& opts) {
  const auto inner = [&](double lam) { return naive_inner(p, d.x, lam); };
  const ScalarMinimum r = scalar_minimize(inner, -b_lambda, b_lambda, opts);
  return finish_prediction(p, d, r.argmin);
}

double violation_objective(const ModelParams& p, const Datapoint& d, Epsilon eps, double lambda) {
  const double r = d.y - g_eval(p, d.x, lambda);
  return r * r + h_eval(p, d.x, d.y, lambda) / eps.value();
}

LossEval loss_violation(const ModelParams& p, const Datapoint& d, Epsilon eps, double b_lambda) {
  const double m = p.mass;
  const double e = eps.value();
  const double d_v = d.y - d.x.v + p.a_grav * p.dt;
  const double phi = end_gap(p, d.x, d.y);

  const double lam_neg = clamp(2.0 * d_v / (m * (1.0 / e + 2.0 / (m * m))), -b_lambda, 0.0);
  const double lam_pos = clamp(m * (d_v - m * pos(phi) / (2.0 * e)), 0.0, b_lambda);

  double best_lambda = 0.0;
  double best = violation_objective(p, d, eps, 0.0);
  for (double lam : {lam_neg, lam_pos}) {
    const double v = violation_objective(p, d, eps, lam);
    if (v < best) {
      best = v;
      best_lambda = lam;
    }
  }
  if (!std::isfinite(best)) throw NumericalError("loss_violation: nonfinite objective");
  return finish_violation(p, d, best_lambda, best);
}

LossEval loss_violation_numeric(const ModelParams& p, const Datapoint& d, Epsilon eps, double b_lambda,
                                const ScalarMinimizeOptions& opts) {
  const auto obj = [&](double lam) { return violation_objective(p, d, eps, lam); };
  const ScalarMinimum r = scalar_minimize(obj, -b_lambda, b_lambda, opts);
  return finish_violation(p, d, r.argmin, r.value);
}

LossEval evaluate_loss(LossKind kind, const ModelParams& p, const Datapoint& d, Epsilon eps, double b_lambda) {
  switch (kind) {
    case LossKind::Explicit: return loss_explicit(p, d);
    case LossKind::NaiveImplicit: return loss_naive_implicit(p, d, b_lambda);
    case LossKind::ViolationImplicit: return loss_violation(p, d, eps, b_lambda);
  }
  throw std::logic_error("evaluate_loss: bad kind");
}

double mean_loss(LossKind kind, const ModelParams& p, std::span<const Datapoint> data, Epsilon eps,
                 double b_lambda) {
  if (data.empty()) throw std::invalid_argument("mean_loss: empty dataset");
  double sum = 0.0;
  for (const Datapoint& d : data) sum += evaluate_loss(kind, p, d, eps, b_lambda).value;
  return sum / static_cast<double>(data.size());
}

std::vector<LandscapeRow> loss_landscape(const ModelParams& p, std::span<const double> thetas,
                                         std::span<const Datapoint> data, LossKind kind, Epsilon eps,
                                         double b_lambda) {
  if (thetas.empty()) throw std::invalid_argument("loss_landscape: empty theta grid");
  if (data.empty()) throw std::invalid_argument("loss_landscape: empty dataset");
  std::vector<LandscapeRow> rows;
  rows.reserve(thetas.size());
  for (double t : thetas) {
    try {
      rows.push_back({t, mean_loss(kind, p.with_theta(t), data, eps, b_lambda)});
    } catch (const NumericalError& err) {
      std::ostringstream os;
      os.precision(17);
      os << "loss_landscape: theta=" << t << ": " << err.what();
      throw NumericalError(os.str());
    }
  }
  return rows;
}

}  // namespace icb
