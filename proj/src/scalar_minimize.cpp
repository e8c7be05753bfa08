#include "icb/scalar_minimize.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "icb/model.hpp"

namespace icb {

namespace {

double checked(const std::function<double(double)>& f, double x, std::size_t& count) {
  const double y = f(x);
  ++count;
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "scalar_minimize: nonfinite objective " << y << " at " << x;
    throw NumericalError(os.str());
  }
  return y;
}

}  // namespace

ScalarMinimum scalar_minimize(const std::function<double(double)>& objective, double lo, double hi,
                              const ScalarMinimizeOptions& opts) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw NumericalError("scalar_minimize: bracket must be finite with lo <= hi");
  }
  ScalarMinimum best;
  const std::size_t n = opts.grid_points < 2 ? 2 : opts.grid_points;
  const double h = (hi - lo) / static_cast<double>(n - 1);

  std::size_t best_i = 0;
  best.argmin = lo;
  best.value = checked(objective, lo, best.evaluations);
  for (std::size_t i = 1; i < n; ++i) {
    const double x = (i + 1 == n) ? hi : lo + h * static_cast<double>(i);
    const double y = checked(objective, x, best.evaluations);
    if (y < best.value) {
      best.value = y;
      best.argmin = x;
      best_i = i;
    }
  }
  if (hi == lo) return best;

  double a = best_i == 0 ? lo : lo + h * static_cast<double>(best_i - 1);
  double b = best_i + 1 >= n ? hi : lo + h * static_cast<double>(best_i + 1);
  a = std::max(a, lo);
  b = std::min(b, hi);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = checked(objective, c, best.evaluations);
  double fd = checked(objective, d, best.evaluations);
  for (int it = 0; it < opts.max_iterations && (b - a) > opts.tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = checked(objective, c, best.evaluations);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = checked(objective, d, best.evaluations);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = checked(objective, mid, best.evaluations);
  for (auto [x, y] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, fmid}}) {
    if (y < best.value) {
      best.value = y;
      best.argmin = x;
    }
  }
  if ((b - a) > opts.tol) {
    std::ostringstream os;
    os << "scalar_minimize: bracket width " << (b - a) << " above tol " << opts.tol << " after "
       << opts.max_iterations << " iterations";
    throw NumericalError(os.str());
  }
  return best;
}

}  // namespace icb
