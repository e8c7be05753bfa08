#pragma once

#include <vector>

#include "icb/model.hpp"

namespace icb {

/// Argument of the pos-term in the time-stepping map:
/// -v + a_grav*dt + (theta - z)/dt. Positive exactly when contact is active.
inline double contact_slack(const ModelParams& p, State x) {
  return -(x.v - p.a_grav * p.dt) + (p.theta - x.z) / p.dt;
}

/// One step of the LCP time-stepping map: velocity after dt, with the ground
/// impulse applied whenever free fall would end below the ground.
inline double step_explicit(const ModelParams& p, State x) {
  return (x.v - p.a_grav * p.dt) + pos(contact_slack(p, x));
}

/// Impulse implied by the pos-term of step_explicit.
inline double contact_impulse(const ModelParams& p, State x) {
  return p.mass * pos(contact_slack(p, x));
}

/// Velocity prediction for a given contact impulse.
inline double g_eval(const ModelParams& p, State x, double lambda) {
  return (x.v - p.a_grav * p.dt) + lambda / p.mass;
}

/// Signed gap at the end of the step: z + v'*dt - theta.
inline double end_gap(const ModelParams& p, State x, double v_next) {
  return x.z + v_next * p.dt - p.theta;
}

/// Complementarity violation. Zero iff gap >= 0, lambda >= 0, gap*lambda == 0.
inline double h_eval(const ModelParams& p, State x, double v_next, double lambda) {
  const double phi = end_gap(p, x, v_next);
  return 0.5 * neg(phi) * neg(phi) + 0.5 * neg(lambda) * neg(lambda) + pos(phi) * pos(lambda);
}

/// Repeated application of step_explicit with z advanced by v'*dt. Returns
/// steps+1 states starting at x0.
std::vector<State> simulate_trajectory(const ModelParams& p, State x0, int steps);

}  // namespace icb
