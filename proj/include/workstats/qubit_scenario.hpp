#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "workstats/qlinalg.hpp"

namespace workstats {

/// SU(2) drive exp(-i delta n.sigma) on a qubit with gap Delta.
struct QubitDrive {
  Eigen::Vector3d axis;
  double delta_angle;
  double gap;

  /// Normalizes `axis`; throws InvalidArgument for a zero axis or gap <= 0.
  static QubitDrive make(const Eigen::Vector3d& axis, double delta_angle, double gap = 1.0);
};

/// The driven-qubit example: axis (0.83, 0, 0.55) renormalized, delta = 1, unit gap.
QubitDrive reference_drive();

/// -(Delta/2) sigma_z = diag(-Delta/2, +Delta/2); |0> is the ground state.
HermitianOperatord qubit_hamiltonian(double gap);

/// cos(delta) 1 - i sin(delta) (n_x sigma_x + n_y sigma_y + n_z sigma_z).
UnitaryOperatord su2_unitary(const QubitDrive& drive);

struct PhaseReadout {};
/// Pointer readout with lambda = 1 and sigma = sigma_ratio * lambda * Delta.
struct PointerReadout {
  double sigma_ratio;
};
using Readout = std::variant<PhaseReadout, PointerReadout>;

struct BetaSweepRow {
  double beta_delta;
  /// "thermal" or "phi=<value>".
  std::string label;
  double exp_work;
  double mean_work;
  double je_deviation;
  /// l1 coherence of the Gibbs state in the evolved phase basis.
  double bound;
};

/// For each beta (in units of 1/Delta) one thermal row followed by one row per phase.
std::vector<BetaSweepRow> sweep_beta(const QubitDrive& drive, const std::vector<double>& phases,
                                     const std::vector<double>& beta_grid, const Readout& readout,
                                     unsigned threads = 1);

struct SigmaSweepRow {
  double sigma_ratio;
  /// Pointer-readout <W> of the coherent state minus that of the thermal state.
  double work_diff;
};

std::vector<SigmaSweepRow> sweep_sigma(const QubitDrive& drive, double phi, double beta,
                                       const std::vector<double>& sigma_ratios,
                                       unsigned threads = 1);

std::vector<double> log_grid(double lo, double hi, std::size_t points);
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

std::string phase_label(double phi);

} // namespace workstats
