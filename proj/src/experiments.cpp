#include "icb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "icb/contact_model.hpp"
#include "icb/sampling.hpp"

namespace icb {

void NoiseConfig::validate() const {
  if (!(sigma_x >= 0.0) || !(sigma_y >= 0.0)) throw std::invalid_argument("noise sigmas must be >= 0");
}

Dataset generate_dataset(const ModelParams& p, const DomainBounds& b, std::size_t n, const NoiseConfig& noise,
                         double contact_bias) {
  if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
  if (!(contact_bias >= 0.0 && contact_bias <= 1.0)) {
    throw std::invalid_argument("generate_dataset: contact_bias must lie in [0, 1]");
  }
  noise.validate();
  Dataset ds;
  ds.theta_true = p.theta;
  ds.noise = noise;
  ds.points.resize(n);
  std::vector<unsigned char> contact(n, 0);
  for_each_block(n, noise.seed, [&](std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    for (std::size_t i = begin; i < end; ++i) {
      const bool forced = uniform(rng, 0.0, 1.0) < contact_bias;
      const State x = forced ? sample_contact_state(rng, p, b) : sample_state(rng, b);
      contact[i] = contact_slack(p, x) > 0.0;
      const double y = step_explicit(p, x);
      const double nz = gaussian(rng, noise.sigma_x);
      const double nv = gaussian(rng, noise.sigma_x);
      const double ny = gaussian(rng, noise.sigma_y);
      ds.points[i] = {{x.z + nz, x.v + nv}, y + ny};
    }
  });
  std::size_t active = 0;
  for (unsigned char c : contact) active += c;
  ds.contact_fraction = static_cast<double>(active) / static_cast<double>(n);
  return ds;
}

TrainResult train(const ModelParams& p, const DomainBounds& b, const Dataset& data, LossKind kind, Epsilon eps,
                  const TrainConfig& cfg) {
  if (data.points.empty()) throw std::invalid_argument("train: empty dataset");
  if (!(cfg.step > 0.0) || !(cfg.fd_step > 0.0)) throw std::invalid_argument("train: step sizes must be > 0");

  TrainResult r;
  if (cfg.init) {
    r.theta_init = *cfg.init;
  } else {
    std::mt19937_64 rng = block_rng(cfg.seed, 0);
    r.theta_init = uniform(rng, data.theta_true - 1.0, data.theta_true + 1.0);
  }
  r.theta_init = std::clamp(r.theta_init, -b.b_theta, b.b_theta);

  auto loss_at = [&](double theta) {
    return mean_loss(kind, p.with_theta(theta), data.points, eps, b.b_lambda);
  };

  double theta = r.theta_init;
  double step = cfg.step;
  double last_sign = 0.0;
  std::size_t rising = 0;
  r.loss_curve.reserve(std::min<std::size_t>(cfg.iterations + 1, 4096));
  for (; r.iterations < cfg.iterations; ++r.iterations) {
    const double l0 = loss_at(theta);
    if (!r.loss_curve.empty() && l0 > r.loss_curve.back()) {
      ++rising;
    } else {
      rising = 0;
    }
    r.loss_curve.push_back(l0);
    if (!std::isfinite(l0) || rising >= cfg.patience) {
      r.diverged = true;
      break;
    }
    const double h = cfg.fd_step;
    const double d_plus = (loss_at(theta + h) - l0) / h;
    const double d_minus = (l0 - loss_at(theta - h)) / h;
    if (d_minus <= 0.0 && d_plus >= 0.0) {
      r.converged = true;
      break;
    }
    double grad = 0.5 * (d_plus + d_minus);
    if (d_minus > 0.0 && d_plus < 0.0) grad = std::abs(d_plus) > std::abs(d_minus) ? d_plus : d_minus;
    const double sign = grad > 0.0 ? 1.0 : -1.0;
    if (last_sign != 0.0 && sign != last_sign) step *= 0.5;
    last_sign = sign;
    if (step < cfg.min_step) {
      r.converged = true;
      break;
    }
    theta = std::clamp(theta - sign * step, -b.b_theta, b.b_theta);
  }
  r.theta_hat = theta;
  if (!r.diverged) r.loss_curve.push_back(loss_at(theta));
  return r;
}

std::uint64_t min_samples_for_bound(double target, BoundInputs tmpl) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw std::invalid_argument("min_samples_for_bound: target must be finite and > 0");
  }
  auto bound_at = [&](std::uint64_t n) {
    tmpl.n = static_cast<double>(n);
    return generalization_bound(tmpl);
  };
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  std::uint64_t hi = 1;
  while (bound_at(hi) > target) {
    if (hi >= kLimit) throw NumericalError("min_samples_for_bound: target not reachable below n = 2^62");
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // bound(lo) > target unless hi == 1
  if (hi == 1) return 1;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (bound_at(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

SampleComplexity sample_complexity_ratio(double target, const BoundInputs& pred, const BoundInputs& vimp) {
  SampleComplexity s;
  s.n_pred = min_samples_for_bound(target, pred);
  s.n_vimp = min_samples_for_bound(target, vimp);
  s.ratio = static_cast<double>(s.n_pred) / static_cast<double>(s.n_vimp);
  return s;
}

GeneralizationGap generalization_gap(const ModelParams& p, const DomainBounds& b, const Dataset& train_set,
                                     double theta_hat, LossKind kind, Epsilon eps, std::size_t heldout_n,
                                     std::uint64_t heldout_seed, double contact_bias, double delta) {
  NoiseConfig noise = train_set.noise;
  noise.seed = heldout_seed;
  const ModelParams truth = p.with_theta(train_set.theta_true);
  const Dataset heldout = generate_dataset(truth, b, heldout_n, noise, contact_bias);
  const ModelParams fitted = p.with_theta(theta_hat);

  GeneralizationGap g;
  g.train_loss = mean_loss(kind, fitted, train_set.points, eps, b.b_lambda);
  g.heldout_loss = mean_loss(kind, fitted, heldout.points, eps, b.b_lambda);
  g.gap = std::abs(g.heldout_loss - g.train_loss);

  const LossBounds lb = loss_suprema(truth, b, eps);
  const LossLipschitz lip = loss_lipschitz(truth, b, lipschitz_table(truth, b, eps), lb, eps);
  g.bound = generalization_bound(
      approach_inputs(kind, lip, lb, b.b_theta, delta, static_cast<double>(train_set.points.size())));
  return g;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("linspace: need at least 2 points");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) throw std::invalid_argument("linspace: need lo < hi");
  std::vector<double> out(points);
  const double den = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / den;
  out.back() = hi;
  return out;
}

}  // namespace icb
