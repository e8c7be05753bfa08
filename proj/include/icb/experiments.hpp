#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icb/bounds.hpp"
#include "icb/losses.hpp"
#include "icb/model.hpp"

namespace icb {

struct NoiseConfig {
  double sigma_x = 0.0;  // on z and v, added after simulation
  double sigma_y = 0.0;  // on v'
  std::uint64_t seed = 0;
  void validate() const;
};

struct Dataset {
  std::vector<Datapoint> points;
  double theta_true = 0.0;
  NoiseConfig noise;
  double contact_fraction = 0.0;  // points whose generating step had an active impulse
};

/// n states drawn uniformly from the data box, each replaced with probability
/// contact_bias by a state in active contact near the ground. Outputs come from
/// step_explicit at params.theta; noise is added afterwards.
Dataset generate_dataset(const ModelParams& p, const DomainBounds& b, std::size_t n, const NoiseConfig& noise,
                         double contact_bias);

struct TrainConfig {
  double step = 1e-3;              // initial |delta theta| per iteration
  std::size_t iterations = 50000;  // cap
  std::optional<double> init;      // unset: uniform in [theta_true - 1, theta_true + 1]
  std::uint64_t seed = 0;          // for the random init
  double fd_step = 1e-6;
  double min_step = 1e-12;         // converged once the step shrinks below this
  std::size_t patience = 1000;     // consecutive loss increases that count as divergence
};

struct TrainResult {
  double theta_init = 0.0;
  double theta_hat = 0.0;
  std::vector<double> loss_curve;  // mean loss before each update, then the final value
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
};

/// Full-batch descent on the mean loss over theta. The subgradient comes from
/// one-sided finite differences: zero when they bracket 0, their mean
/// otherwise. Each update moves theta by the current step against the
/// subgradient sign; the step halves whenever the sign flips. theta is kept in
/// [-b_theta, b_theta].
TrainResult train(const ModelParams& p, const DomainBounds& b, const Dataset& data, LossKind kind, Epsilon eps,
                  const TrainConfig& cfg = {});

/// Smallest integer n with generalization_bound <= target (n overwritten in
/// the template). Throws std::invalid_argument for target <= 0 and
/// NumericalError when no n below 2^62 suffices.
std::uint64_t min_samples_for_bound(double target, BoundInputs tmpl);

struct SampleComplexity {
  std::uint64_t n_pred = 0;
  std::uint64_t n_vimp = 0;
  double ratio = 0.0;  // n_pred / n_vimp
};

SampleComplexity sample_complexity_ratio(double target, const BoundInputs& pred, const BoundInputs& vimp);

struct GeneralizationGap {
  double train_loss = 0.0;
  double heldout_loss = 0.0;
  double gap = 0.0;    // |heldout - train|
  double bound = 0.0;  // generalization_bound at the training-set size
};

/// Compares the training loss of theta_hat with its mean loss on a fresh
/// held-out draw of heldout_n points from the same generator.
GeneralizationGap generalization_gap(const ModelParams& p, const DomainBounds& b, const Dataset& train_set,
                                     double theta_hat, LossKind kind, Epsilon eps, std::size_t heldout_n,
                                     std::uint64_t heldout_seed, double contact_bias, double delta);

/// theta values lo, ..., hi with `points` entries (points >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t points);

}  // namespace icb
