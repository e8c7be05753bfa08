#pragma once

#include <cstddef>
#include <functional>

namespace icb {

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

struct ScalarMinimizeOptions {
  std::size_t grid_points = 10001;  // bracketing grid, endpoints included
  double tol = 1e-10;               // final bracket width on the argument
  int max_iterations = 500;
};

/// Bracketed 1-D minimizer: dense grid scan over [lo, hi], then golden-section
/// refinement inside the two cells adjacent to the best grid point. Returns
/// the best point seen, so the result never exceeds the grid minimum.
/// Throws NumericalError on a nonfinite objective value or bracket.
ScalarMinimum scalar_minimize(const std::function<double(double)>& objective, double lo, double hi,
                              const ScalarMinimizeOptions& opts = {});

}  // namespace icb
