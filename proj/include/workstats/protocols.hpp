#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "workstats/qlinalg.hpp"
#include "workstats/states.hpp"

namespace workstats {

struct WorkAtom {
  double work;
  double weight;
};

/// Finite set of work values with real weights, sorted by work.
///
/// Weights may be negative for quasi-probabilities. No two atoms are closer
/// than merge_tol.
class WorkAtomDistribution {
public:
  WorkAtomDistribution(std::vector<WorkAtom> atoms, double merge_tol);

  const std::vector<WorkAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double merge_tol() const { return merge_tol_; }

  double total_weight() const;
  double min_weight() const;
  /// sum_a weight_a f(w_a).
  template <typename F>
  auto expectation(F&& f) const {
    decltype(f(0.0) * 1.0) acc{};
    for (const WorkAtom& a : atoms_) acc += a.weight * f(a.work);
    return acc;
  }
  double mean() const;
  /// sum_a weight_a exp(-beta w_a).
  double exp_average(double beta) const;
  /// sum_a weight_a exp(i lambda w_a).
  std::complex<double> characteristic(double lambda) const;

private:
  std::vector<WorkAtom> atoms_;
  double merge_tol_;
};

struct AtomOptions {
  /// Defaults to 1e-9 times the joint spectral range of H0 and Htau.
  std::optional<double> merge_tol;
  /// Merged atoms with |weight| at or below this are dropped.
  double prune_tol = 1e-14;
};

/// Two projective energy measurements: atoms at e^tau_j - e^0_i with weight
/// p_i |V_ji|^2, p_i the H0-basis populations of rho0.
WorkAtomDistribution tpm_distribution(const SystemState& rho0, const UnitaryOperatord& v,
                                      const HermitianOperatord& h0,
                                      const HermitianOperatord& htau,
                                      const AtomOptions& options = {});

/// Phase-readout quasi-distribution: contributions rho_ik V^dag_kj V_ji at
/// e^tau_j - (e^0_i + e^0_k)/2, merged and checked to be real.
WorkAtomDistribution fcs_quasi_distribution(const SystemState& rho0, const UnitaryOperatord& v,
                                            const HermitianOperatord& h0,
                                            const HermitianOperatord& htau,
                                            const AtomOptions& options = {});

/// G_lambda summed over the atoms of fcs_quasi_distribution.
std::complex<double> characteristic_function(const SystemState& rho0, const UnitaryOperatord& v,
                                             const HermitianOperatord& h0,
                                             const HermitianOperatord& htau, double lambda);

/// Tr[exp(-i l H0/2) rho0 exp(-i l H0/2) V^dag exp(i l Htau) V].
std::complex<double> characteristic_function_trace(const SystemState& rho0,
                                                   const UnitaryOperatord& v,
                                                   const HermitianOperatord& h0,
                                                   const HermitianOperatord& htau,
                                                   double lambda);

/// Gaussian detector wavepacket in position space. A shift of the detector by
/// x - x0 reads out work W = -(x - x0)/lambda.
struct GaussianPointer {
  double x0 = 0.0;
  double sigma = 1.0;
  double lambda = 1.0;

  /// Throws InvalidArgument unless sigma > 0 and lambda > 0.
  void validate() const;
  /// (2 pi sigma^2)^{-1/4} exp(-(x - x0)^2 / (4 sigma^2)).
  double amplitude(double x) const;
  double work_from_position(double x) const { return -(x - x0) / lambda; }
};

struct GridSpec {
  std::size_t points = 4096;
  /// Half-widths of padding, in units of sigma, beyond the extreme shifts.
  double margin_sigmas = 8.0;
  /// Explicit bounds override the automatic span.
  std::optional<double> x_min;
  std::optional<double> x_max;
};

struct PointerDensity {
  Eigen::VectorXd grid;
  Eigen::VectorXd density;
  GaussianPointer pointer;

  /// Trapezoid rule of density * f(x) over the grid.
  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index n = 0; n + 1 < grid.size(); ++n)
      acc += 0.5 * (grid(n + 1) - grid(n)) *
             (density(n) * f(grid(n)) + density(n + 1) * f(grid(n + 1)));
    return acc;
  }
  double normalization() const;
  double mean_position() const;
  /// Probability mass inside [a, b] by the trapezoid rule on grid points in that range.
  double mass_between(double a, double b) const;
};

/// Detector position density after the drive. Requires pointer.x0 == 0.
/// Throws GridTooNarrow if more than 1e-8 of the mass lies outside the grid
/// and GridTooCoarse if the spacing exceeds sigma.
PointerDensity pointer_distribution(const SystemState& rho0, const UnitaryOperatord& v,
                                    const HermitianOperatord& h0, const HermitianOperatord& htau,
                                    const GaussianPointer& pointer, const GridSpec& grid = {});

/// rho0 in the H0 eigenbasis: <e_i|rho0|e_k>.
ComplexMatrixd energy_basis_density(const SystemState& rho0, const HermitianOperatord& h0);

} // namespace workstats
