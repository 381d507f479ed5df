#include "workstats/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace workstats {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, /*max_depth=*/15, rel_tol, &error);
  return {value, error};
}

} // namespace workstats
