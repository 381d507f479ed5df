#pragma once

#include <optional>

#include "workstats/protocols.hpp"
#include "workstats/qlinalg.hpp"
#include "workstats/states.hpp"

namespace workstats {

// Work averages for a periodic drive (H(tau) = H(0) = H0).
//
// Thermal and coherent-Gibbs states go through the evolved phase basis
// |e~_i> = exp(i phi_i) V |e_i>; any other density matrix goes through its
// H0-basis elements rho_ik. Both routes agree for the states they share.

struct WorkAverages {
  double mean_work = 0.0;
  /// Contribution of the H0-basis populations.
  double classical_part = 0.0;
  /// Contribution of the H0-basis coherences.
  double quantum_part = 0.0;
  /// <exp(-beta W)> at the state's own beta, when it has one.
  std::optional<double> exp_work;
  /// exp_work minus its thermal reference (1 for the phase readout,
  /// exp(beta^2 sigma^2 / 2 lambda^2) for the pointer readout).
  std::optional<double> je_deviation;
};

/// rho0 in the H0 eigenbasis. For thermal and coherent-Gibbs states the
/// elements are rebuilt from (beta, phases) and checked against the stored
/// density; InvalidState if the state was built from another Hamiltonian.
ComplexMatrixd initial_coherences(const SystemState& state, const HermitianOperatord& h0);

/// Columns exp(i phi_i) V |e_i> (phi = 0 for a thermal state).
ComplexMatrixd evolved_phase_basis(const SystemState& state, const UnitaryOperatord& v,
                                   const HermitianOperatord& h0);

/// <exp(-beta W)> under the phase-readout quasi-distribution.
double avg_exp_work_p1(const SystemState& state, const UnitaryOperatord& v,
                       const HermitianOperatord& h0, double beta);

struct JeDeviation {
  double deviation;
  /// l1 coherence of the Gibbs state in the evolved phase basis.
  double bound;
};

/// |<exp(-beta W)> - 1| and its l1-coherence bound. Thermal or coherent-Gibbs states only.
JeDeviation je_deviation_bound(const SystemState& state, const UnitaryOperatord& v,
                               const HermitianOperatord& h0, double beta);

WorkAverages avg_work_p1(const SystemState& state, const UnitaryOperatord& v,
                         const HermitianOperatord& h0);

enum class OverlapMoment { Zeroth, First };

/// Closed form of int dW lambda W^m exp(-beta W) phi(lambda(e_ji - W)) phi(lambda(e_jk - W)),
/// m = 0 or 1. With c = (e_ji + e_jk)/2, s = sigma/lambda and
/// damping = exp(-lambda^2 (e_jk - e_ji)^2 / (8 sigma^2)):
///   zeroth = damping * exp(-beta c + beta^2 s^2 / 2)
///   first  = zeroth * (c - beta s^2)
double gaussian_tilted_overlap(double eps_ji, double eps_jk, const GaussianPointer& pointer,
                               double beta, OverlapMoment moment);

/// The same integral by adaptive Gauss-Kronrod quadrature.
double gaussian_tilted_overlap_quadrature(double eps_ji, double eps_jk,
                                          const GaussianPointer& pointer, double beta,
                                          OverlapMoment moment);

/// exp(beta^2 sigma^2 / (2 lambda^2)), the pointer readout's thermal value of <exp(-beta W)>.
double pointer_exp_work_reference(const GaussianPointer& pointer, double beta);

struct LogScaled {
  double value;
  double log_value;
};

/// <exp(-beta W)> under the pointer readout. Throws Overflow when the value
/// itself is not representable; log_value is always finite.
LogScaled avg_exp_work_p2(const SystemState& state, const UnitaryOperatord& v,
                          const HermitianOperatord& h0, const GaussianPointer& pointer,
                          double beta);

/// Mean work under the pointer readout. exp_work is left empty when it overflows.
WorkAverages avg_work_p2(const SystemState& state, const UnitaryOperatord& v,
                         const HermitianOperatord& h0, const GaussianPointer& pointer);

/// Trapezoid estimates from a sampled pointer density, reading W = -(x - x0)/lambda.
double exp_work_from_pointer(const PointerDensity& density, double beta);
double mean_work_from_pointer(const PointerDensity& density);

} // namespace workstats
