#include "icb/contact_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace icb {

void ModelParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("mass must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  if (!(a_grav > 0.0) || !std::isfinite(a_grav)) throw std::invalid_argument("a_grav must be > 0");
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

DomainBounds DomainBounds::from_params(const ModelParams& params, double phi_max, double v_max,
                                       double b_theta, double penetration, double b_lambda,
                                       double lambda_max) {
  params.validate();
  DomainBounds b;
  b.phi_max = phi_max;
  b.v_max = v_max;
  b.b_theta = b_theta;
  b.penetration = penetration;
  b.lambda_max = lambda_max > 0.0 ? lambda_max : params.mass * (v_max + params.a_grav * params.dt);
  b.z_lo = params.theta - penetration;
  b.z_hi = params.theta + phi_max - v_max * params.dt;
  if (b_lambda > 0.0) {
    b.b_lambda = b_lambda;
  } else {
    // Largest m*pos(-v + a*dt + (theta - z)/dt) over |theta| <= b_theta, z >= z_lo.
    const double reach = std::max(0.0, b_theta - b.z_lo);
    b.b_lambda = std::max(b.lambda_max, params.mass * (v_max + params.a_grav * params.dt + reach / params.dt));
  }
  b.validate();
  return b;
}

void DomainBounds::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(phi_max, "phi_max");
  positive(v_max, "v_max");
  positive(lambda_max, "lambda_max");
  positive(b_theta, "b_theta");
  positive(b_lambda, "b_lambda");
  if (!(penetration >= 0.0)) throw std::invalid_argument("penetration must be >= 0");
  if (!(z_hi > z_lo)) throw std::invalid_argument("z_hi must exceed z_lo");
  if (b_lambda < lambda_max) throw std::invalid_argument("b_lambda must be >= lambda_max");
}

std::vector<State> simulate_trajectory(const ModelParams& p, State x0, int steps) {
  if (steps < 1) throw std::invalid_argument("simulate_trajectory: steps must be >= 1");
  if (!std::isfinite(x0.z) || !std::isfinite(x0.v)) {
    throw std::invalid_argument("simulate_trajectory: initial state must be finite");
  }
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(x0);
  State x = x0;
  for (int i = 0; i < steps; ++i) {
    const double v_next = step_explicit(p, x);
    x = State{x.z + v_next * p.dt, v_next};
    out.push_back(x);
  }
  return out;
}

}  // namespace icb
