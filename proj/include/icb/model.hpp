#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace icb {

/// Raised when an inner solver or numerical routine fails (nonfinite values,
/// no convergence). Maps to CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or missing configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double pos(double x) { return std::max(0.0, x); }
inline double neg(double x) { return -std::min(0.0, x); }

/// Physical constants of the point-mass-over-ground system plus the learnable
/// ground height.
struct ModelParams {
  double mass = 1.0;     // kg
  double dt = 0.005;     // s
  double a_grav = 9.81;  // m/s^2
  double theta = 0.0;    // ground height, m

  void validate() const;
  ModelParams with_theta(double t) const {
    ModelParams p = *this;
    p.theta = t;
    return p;
  }
  bool operator==(const ModelParams&) const = default;
};

/// Box over which data, parameters and impulses range.
///
/// The data box is z in [theta_true - penetration, theta_true + phi_max -
/// v_max*dt], v in [-v_max, v_max]; the upper z limit keeps the end-of-step gap
/// below phi_max for any |v'| <= v_max. lambda_max is the largest physical
/// impulse from a non-penetrating state, b_lambda the half-width of the
/// feasible impulse set used by the inner minimizations.
struct DomainBounds {
  double phi_max = 8.0;
  double v_max = 15.0;
  double lambda_max = 15.04905;
  double b_theta = 8.0;
  double b_lambda = 15.04905;
  double z_lo = -0.1;
  double z_hi = 7.925;
  double penetration = 0.1;

  /// Builds the box around params.theta (taken as the true ground height).
  /// A nonpositive b_lambda selects the automatic value, the largest contact
  /// impulse reachable for any |theta| <= b_theta and any state in the box.
  /// A nonpositive lambda_max selects m*(v_max + a_grav*dt).
  static DomainBounds from_params(const ModelParams& params, double phi_max = 8.0,
                                  double v_max = 15.0, double b_theta = 8.0,
                                  double penetration = 0.1, double b_lambda = 0.0,
                                  double lambda_max = 0.0);

  void validate() const;
  bool operator==(const DomainBounds&) const = default;
};

struct State {
  double z = 0.0;  // m
  double v = 0.0;  // m/s
  bool operator==(const State&) const = default;
};

/// One (x, y) sample: a state and the observed velocity after one step.
struct Datapoint {
  State x;
  double y = 0.0;
  bool operator==(const Datapoint&) const = default;
};

/// Weight of the violation term in the violation-implicit loss; strictly
/// positive.
class Epsilon {
 public:
  explicit Epsilon(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("epsilon must be finite and > 0, got " + std::to_string(value));
    }
  }
  double value() const { return value_; }
  bool operator==(const Epsilon&) const = default;

 private:
  double value_;
};

}  // namespace icb
