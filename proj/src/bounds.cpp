#include "icb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "icb/contact_model.hpp"
#include "icb/sampling.hpp"

namespace icb {

double LossLipschitz::for_kind(LossKind kind) const {
  switch (kind) {
    case LossKind::Explicit: return exp_theta;
    case LossKind::NaiveImplicit: return nimp_theta;
    case LossKind::ViolationImplicit: return vimp_theta;
  }
  throw std::logic_error("LossLipschitz::for_kind: bad kind");
}

void BoundInputs::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(n >= 1.0) || !std::isfinite(n)) throw std::invalid_argument("n must be >= 1");
  if (!(k >= 1.0) || !std::isfinite(k)) throw std::invalid_argument("k must be >= 1");
  if (!(b_theta >= 0.0) || !(L_loss_theta >= 0.0) || !(B_loss >= 0.0)) {
    throw std::invalid_argument("b_theta, L_loss_theta and B_loss must be >= 0");
  }
}

LipschitzTable lipschitz_table(const ModelParams& p, const DomainBounds& b, Epsilon eps) {
  p.validate();
  b.validate();
  const double m = p.mass;
  const double dt = p.dt;
  LipschitzTable t;
  t.L_f_theta = 1.0 / dt;
  t.L_g_lambda = 1.0 / m;
  t.L_g_theta = 0.0;
  t.L_h_lambda = std::max(b.phi_max, b.lambda_max);
  t.L_h_theta = std::max(b.phi_max, b.lambda_max);
  t.L_lambda_theta_nimp = std::max(m * dt / (m * m + dt * dt), m / dt);
  t.L_lambda_theta_vimp = m * m / (2.0 * eps.value());
  return t;
}

double lambda_sensitivity(double h_lambda_lambda, double h_theta_lambda) {
  if (!(std::abs(h_lambda_lambda) >= 1e-12)) {
    throw NumericalError("lambda_sensitivity: singular curvature d2h/dlambda2 = " + std::to_string(h_lambda_lambda));
  }
  return -h_theta_lambda / h_lambda_lambda;
}

LossLipschitz loss_lipschitz(const ModelParams& p, const DomainBounds& b, const LipschitzTable& t,
                             const LossBounds& lb, Epsilon eps) {
  const double m = p.mass;
  const double dt = p.dt;
  const double e = eps.value();
  LossLipschitz out;
  out.exp_theta = 2.0 * lb.B_exp / dt;
  out.nimp_theta = 2.0 * lb.B_nimp / dt;
  out.vimp_theta = (m * lb.B_nimp + b.lambda_max * (1.0 + m * m / (2.0 * e))) / e;

  out.exp_theta_general = 2.0 * lb.B_exp * t.L_f_theta;
  out.nimp_theta_general = 2.0 * lb.B_nimp * (t.L_g_lambda * t.L_lambda_theta_nimp + t.L_g_theta);
  out.vimp_theta_general = 2.0 * lb.B_nimp * (t.L_g_lambda * t.L_lambda_theta_vimp + t.L_g_theta) +
                           (t.L_h_lambda * t.L_lambda_theta_vimp + t.L_h_theta) / e;
  return out;
}

LossBounds loss_suprema(const ModelParams& p, const DomainBounds& b, Epsilon eps) {
  p.validate();
  b.validate();
  LossBounds lb;
  lb.B_f = std::max(b.v_max + p.a_grav * p.dt + b.lambda_max / p.mass, b.penetration / p.dt);
  lb.B_g = lb.B_f;
  lb.B_exp = (b.v_max + lb.B_f) * (b.v_max + lb.B_f);
  lb.B_nimp = lb.B_exp;
  const double phi = std::max(b.phi_max, b.penetration + b.v_max * p.dt);
  lb.B_h = std::max({0.5 * phi * phi, 0.5 * b.lambda_max * b.lambda_max, phi * b.lambda_max});
  lb.B_vimp = lb.B_nimp + lb.B_h / eps.value();
  return lb;
}

LossBounds empirical_suprema(const ModelParams& p, const DomainBounds& b, Epsilon eps, std::size_t samples,
                             std::uint64_t seed) {
  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<LossBounds> partial(blocks);
  for_each_block(samples, seed, [&](std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    LossBounds& acc = partial[begin / kSampleBlock];
    for (std::size_t i = begin; i < end; ++i) {
      const State x = sample_state(rng, b);
      const double y = uniform(rng, -b.v_max, b.v_max);
      const double lam = uniform(rng, -b.lambda_max, b.lambda_max);
      const Datapoint d{x, y};
      acc.B_f = std::max(acc.B_f, std::abs(step_explicit(p, x)));
      acc.B_g = std::max(acc.B_g, std::abs(g_eval(p, x, lam)));
      acc.B_h = std::max(acc.B_h, h_eval(p, x, y, lam));
      acc.B_exp = std::max(acc.B_exp, loss_explicit(p, d).value);
      acc.B_nimp = std::max(acc.B_nimp, loss_naive_implicit(p, d, b.b_lambda).value);
      acc.B_vimp = std::max(acc.B_vimp, loss_violation(p, d, eps, b.b_lambda).value);
    }
  });
  LossBounds out;
  for (const LossBounds& lb : partial) {
    out.B_f = std::max(out.B_f, lb.B_f);
    out.B_g = std::max(out.B_g, lb.B_g);
    out.B_h = std::max(out.B_h, lb.B_h);
    out.B_exp = std::max(out.B_exp, lb.B_exp);
    out.B_nimp = std::max(out.B_nimp, lb.B_nimp);
    out.B_vimp = std::max(out.B_vimp, lb.B_vimp);
  }
  return out;
}

double generalization_bound(const BoundInputs& in) {
  in.validate();
  return 44.0 * in.L_loss_theta * in.b_theta * std::sqrt(in.k / in.n) +
         in.B_loss * std::sqrt(std::log(1.0 / in.delta) / (2.0 * in.n));
}

std::vector<BoundCurveRow> bound_curve(SweepKind kind, std::span<const double> values, const BoundInputs& exp,
                                       const BoundInputs& nimp, const BoundInputs& vimp) {
  if (values.empty()) throw std::invalid_argument("bound_curve: empty sweep");
  std::vector<BoundCurveRow> rows;
  rows.reserve(values.size());
  for (double s : values) {
    auto at = [&](BoundInputs in) {
      (kind == SweepKind::DatasetSize ? in.n : in.delta) = s;
      return generalization_bound(in);
    };
    rows.push_back({s, at(exp), at(nimp), at(vimp)});
  }
  return rows;
}

BoundInputs approach_inputs(LossKind kind, const LossLipschitz& lip, const LossBounds& lb, double b_theta,
                            double delta, double n, double k) {
  BoundInputs in;
  in.delta = delta;
  in.n = n;
  in.k = k;
  in.b_theta = b_theta;
  in.L_loss_theta = lip.for_kind(kind);
  switch (kind) {
    case LossKind::Explicit: in.B_loss = lb.B_exp; break;
    case LossKind::NaiveImplicit: in.B_loss = lb.B_nimp; break;
    case LossKind::ViolationImplicit: in.B_loss = lb.B_vimp; break;
  }
  return in;
}

bool LipschitzValidation::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const SlopeReport& r) { return r.violations.empty(); });
}

LipschitzValidation lipschitz_validate(const ModelParams& p, const DomainBounds& b, Epsilon eps,
                                       std::size_t samples, std::uint64_t seed, double step) {
  if (samples < 1) throw std::invalid_argument("lipschitz_validate: samples must be >= 1");
  const LipschitzTable table = lipschitz_table(p, b, eps);
  const LossBounds lb = loss_suprema(p, b, eps);
  const LossLipschitz lip = loss_lipschitz(p, b, table, lb, eps);
  constexpr LossKind kinds[] = {LossKind::Explicit, LossKind::NaiveImplicit, LossKind::ViolationImplicit};
  constexpr double rel_tol = 1e-3;

  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<std::vector<SlopeReport>> partial(blocks, std::vector<SlopeReport>(3));
  for_each_block(samples, seed, [&](std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    auto& reps = partial[begin / kSampleBlock];
    for (std::size_t i = begin; i < end; ++i) {
      const Datapoint d = sample_mixed_datapoint(rng, p, b);
      const double theta = p.theta + uniform(rng, -0.1, 0.1);
      const ModelParams p0 = p.with_theta(theta);
      const ModelParams p1 = p.with_theta(theta + step);
      for (std::size_t k = 0; k < 3; ++k) {
        const LossEval e0 = evaluate_loss(kinds[k], p0, d, eps, b.b_lambda);
        const LossEval e1 = evaluate_loss(kinds[k], p1, d, eps, b.b_lambda);
        const double slope = std::abs(e1.value - e0.value) / step;
        SlopeReport& r = reps[k];
        r.max_slope = std::max(r.max_slope, slope);
        if (e0.branch == e1.branch) {
          ++r.same_branch_samples;
          r.max_same_branch_slope = std::max(r.max_same_branch_slope, slope);
        }
        if (slope > lip.for_kind(kinds[k]) * (1.0 + rel_tol)) r.violations.push_back({d, theta, slope});
      }
    }
  });

  LipschitzValidation out;
  out.samples = samples;
  out.step = step;
  for (std::size_t k = 0; k < 3; ++k) {
    SlopeReport r;
    r.kind = kinds[k];
    r.bound = lip.for_kind(kinds[k]);
    for (const auto& reps : partial) {
      r.max_slope = std::max(r.max_slope, reps[k].max_slope);
      r.max_same_branch_slope = std::max(r.max_same_branch_slope, reps[k].max_same_branch_slope);
      r.same_branch_samples += reps[k].same_branch_samples;
      r.violations.insert(r.violations.end(), reps[k].violations.begin(), reps[k].violations.end());
    }
    out.reports.push_back(std::move(r));
  }
  return out;
}

}  // namespace icb
