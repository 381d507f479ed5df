#pragma once

#include <optional>
#include <vector>

#include "workstats/qlinalg.hpp"

namespace workstats {

enum class StateKind { ThermalMixed, CoherentPure, GeneralDensity };

/// Density matrix of the driven system.
///
/// Thermal and coherent-Gibbs states remember the inverse temperature they
/// were built at; coherent-Gibbs states also keep their phase vector, indexed
/// like the eigenvalues of the Hamiltonian used to build them.
class SystemState {
public:
  /// Validates an arbitrary density matrix (Hermitian, PSD, unit trace).
  static SystemState general(const ComplexMatrixd& density);

  StateKind kind() const { return kind_; }
  Eigen::Index dim() const { return density_.rows(); }
  const ComplexMatrixd& density() const { return density_; }
  const std::optional<Eigen::VectorXd>& phases() const { return phases_; }
  const std::optional<double>& beta() const { return beta_; }

private:
  friend SystemState thermal_state(const HermitianOperatord&, double);
  friend SystemState coherent_gibbs_state(const HermitianOperatord&, double,
                                          const Eigen::VectorXd&);

  SystemState(StateKind kind, ComplexMatrixd density, std::optional<Eigen::VectorXd> phases,
              std::optional<double> beta);

  StateKind kind_;
  ComplexMatrixd density_;
  std::optional<Eigen::VectorXd> phases_;
  std::optional<double> beta_;
};

/// Z = sum_k exp(-beta e_k).
double partition_function(const HermitianOperatord& h, double beta);

/// Boltzmann populations exp(-beta e_k)/Z in eigenvalue order, evaluated with
/// the ground energy factored out so large beta does not overflow.
Eigen::VectorXd boltzmann_weights(const HermitianOperatord& h, double beta);

SystemState thermal_state(const HermitianOperatord& h, double beta);

/// |Psi> = Z^{-1/2} sum_k exp(i phi_k) exp(-beta e_k / 2) |e_k>.
/// Throws DegenerateBasis when h has a degenerate spectrum.
SystemState coherent_gibbs_state(const HermitianOperatord& h, double beta,
                                 const Eigen::VectorXd& phases);

/// sum_{k != i} |<b_k| rho |b_i>| for the basis stored in the columns of `basis`.
double l1_coherence(const ComplexMatrixd& rho, const ComplexMatrixd& basis);
double l1_coherence(const SystemState& rho, const ComplexMatrixd& basis);

} // namespace workstats
