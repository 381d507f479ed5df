#include "workstats/states.hpp"

#include <cmath>
#include <string>

namespace workstats {

namespace {

void check_beta(double beta) {
  if (!std::isfinite(beta) || beta < 0.0)
    throw InvalidArgument("inverse temperature must be finite and >= 0, got " +
                          std::to_string(beta));
}

void validate_density(const ComplexMatrixd& rho) {
  if (rho.rows() == 0 || rho.rows() != rho.cols())
    throw DimensionMismatch("density matrix must be square and non-empty");
  if (!all_finite(rho)) throw InvalidState("density matrix has a non-finite entry");
  if (!is_hermitian(rho)) throw InvalidState("density matrix is not Hermitian");
  const std::complex<double> tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > tol::trace || std::abs(tr.imag()) > tol::trace)
    throw InvalidState("density matrix trace differs from 1");
  const Eigen::SelfAdjointEigenSolver<ComplexMatrixd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -tol::positivity)
    throw InvalidState("density matrix has a negative eigenvalue");
}

} // namespace

SystemState::SystemState(StateKind kind, ComplexMatrixd density,
                         std::optional<Eigen::VectorXd> phases, std::optional<double> beta)
    : kind_(kind), density_(std::move(density)), phases_(std::move(phases)), beta_(beta) {
  validate_density(density_);
  if (kind_ == StateKind::CoherentPure) {
    const Eigen::SelfAdjointEigenSolver<ComplexMatrixd> solver(density_, Eigen::EigenvaluesOnly);
    const Eigen::Index d = dim();
    if (d > 1 && solver.eigenvalues()(d - 2) > tol::rank_one)
      throw InvalidState("coherent state is not rank one");
  }
}

SystemState SystemState::general(const ComplexMatrixd& density) {
  return SystemState(StateKind::GeneralDensity, density, std::nullopt, std::nullopt);
}

Eigen::VectorXd boltzmann_weights(const HermitianOperatord& h, double beta) {
  check_beta(beta);
  const Eigen::VectorXd& e = h.eigenvalues();
  Eigen::VectorXd w = (-beta * (e.array() - e(0))).exp().matrix();
  return w / w.sum();
}

double partition_function(const HermitianOperatord& h, double beta) {
  check_beta(beta);
  const Eigen::VectorXd& e = h.eigenvalues();
  return (-beta * e.array()).exp().sum();
}

SystemState thermal_state(const HermitianOperatord& h, double beta) {
  const Eigen::VectorXd p = boltzmann_weights(h, beta);
  ComplexMatrixd rho = h.eigenvectors() * p.cast<std::complex<double>>().asDiagonal() *
                       h.eigenvectors().adjoint();
  return SystemState(StateKind::ThermalMixed, std::move(rho), std::nullopt, beta);
}

SystemState coherent_gibbs_state(const HermitianOperatord& h, double beta,
                                 const Eigen::VectorXd& phases) {
  if (phases.size() != h.dim())
    throw DimensionMismatch("coherent_gibbs_state: need one phase per energy level");
  if (!phases.allFinite()) throw InvalidArgument("coherent_gibbs_state: non-finite phase");
  if (h.has_degenerate_spectrum())
    throw DegenerateBasis("coherent_gibbs_state: Hamiltonian spectrum is degenerate");
  const Eigen::VectorXd p = boltzmann_weights(h, beta);
  ComplexVectord amplitudes(h.dim());
  for (Eigen::Index k = 0; k < h.dim(); ++k)
    amplitudes(k) = std::polar(std::sqrt(p(k)), phases(k));
  const ComplexVectord psi = h.eigenvectors() * amplitudes;
  return SystemState(StateKind::CoherentPure, psi * psi.adjoint(), phases, beta);
}

double l1_coherence(const ComplexMatrixd& rho, const ComplexMatrixd& basis) {
  if (rho.rows() != basis.rows() || !is_orthonormal_basis(basis))
    throw BasisNotOrthonormal("l1_coherence: basis is not an orthonormal basis of the space");
  const ComplexMatrixd in_basis = basis.adjoint() * rho * basis;
  double total = 0.0;
  for (Eigen::Index i = 0; i < in_basis.cols(); ++i)
    for (Eigen::Index k = 0; k < in_basis.rows(); ++k)
      if (k != i) total += std::abs(in_basis(k, i));
  return total;
}

double l1_coherence(const SystemState& rho, const ComplexMatrixd& basis) {
  return l1_coherence(rho.density(), basis);
}

} // namespace workstats
