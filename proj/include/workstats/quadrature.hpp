#pragma once

#include <functional>

namespace workstats {

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b], refined until the estimated
/// error is below rel_tol * |value| or the bisection depth runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-12);

} // namespace workstats
