#include "workstats/random.hpp"

#include <numbers>

namespace workstats {

namespace {

ComplexMatrixd ginibre(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  ComplexMatrixd z(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = {re, im};
    }
  return z;
}

} // namespace

ComplexMatrixd haar_unitary(Eigen::Index d, Rng& rng) {
  const Eigen::HouseholderQR<ComplexMatrixd> qr(ginibre(d, rng));
  ComplexMatrixd q = qr.householderQ() * ComplexMatrixd::Identity(d, d);
  const ComplexMatrixd& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::complex<double> rii = r(i, i);
    if (std::abs(rii) > 0.0) q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

ComplexMatrixd random_hermitian(Eigen::Index d, Rng& rng, double scale) {
  const ComplexMatrixd a = ginibre(d, rng);
  return scale * (a + a.adjoint()) / 2.0;
}

Eigen::VectorXd random_phases(Eigen::Index d, Rng& rng) {
  Eigen::VectorXd phi(d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i) = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return phi;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace workstats
