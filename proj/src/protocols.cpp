#include "workstats/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace workstats {

namespace {

constexpr double kImaginaryTol = 1e-10;

void check_dims(const SystemState& rho0, const UnitaryOperatord& v, const HermitianOperatord& h0,
                const HermitianOperatord& htau) {
  const Eigen::Index d = rho0.dim();
  if (v.dim() != d || h0.dim() != d || htau.dim() != d)
    throw DimensionMismatch("state, drive and Hamiltonians must share one dimension (" +
                            std::to_string(d) + ")");
}

double default_merge_tol(const HermitianOperatord& h0, const HermitianOperatord& htau) {
  const double lo = std::min(h0.eigenvalues()(0), htau.eigenvalues()(0));
  const double hi = std::max(h0.eigenvalues()(h0.dim() - 1), htau.eigenvalues()(htau.dim() - 1));
  const double range = hi - lo;
  if (range > 0.0) return 1e-9 * range;
  return 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

struct Contribution {
  double work;
  std::complex<double> weight;
};

// Sort, coalesce runs whose consecutive gaps are within tol, drop near-zero
// atoms. A merged atom sits at the mean of its members' work values.
WorkAtomDistribution merge(std::vector<Contribution> parts, double tol, double prune_tol) {
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Contribution& a, const Contribution& b) { return a.work < b.work; });
  std::vector<WorkAtom> atoms;
  for (std::size_t start = 0; start < parts.size();) {
    std::size_t stop = start + 1;
    while (stop < parts.size() && parts[stop].work - parts[stop - 1].work <= tol) ++stop;
    double work_sum = 0.0;
    std::complex<double> weight{0.0, 0.0};
    for (std::size_t n = start; n < stop; ++n) {
      work_sum += parts[n].work;
      weight += parts[n].weight;
    }
    const double work = work_sum / static_cast<double>(stop - start);
    if (std::abs(weight.imag()) > kImaginaryTol)
      throw ImaginaryResidue("work atom at " + std::to_string(work) +
                             " keeps imaginary weight " + std::to_string(weight.imag()));
    if (std::abs(weight.real()) > prune_tol) atoms.push_back({work, weight.real()});
    start = stop;
  }
  return WorkAtomDistribution(std::move(atoms), tol);
}

void require_block_diagonal(const ComplexMatrixd& rho, const HermitianOperatord& h0) {
  if (!h0.has_degenerate_spectrum()) return;
  const Eigen::VectorXd& e = h0.eigenvalues();
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index k = 0; k < rho.cols(); ++k)
      if (i != k && std::abs(e(i) - e(k)) < tol::degenerate_gap &&
          std::abs(rho(i, k)) > tol::positivity)
        throw DegenerateBasis(
            "initial state has coherences inside a degenerate eigenspace of H0");
}

} // namespace

WorkAtomDistribution::WorkAtomDistribution(std::vector<WorkAtom> atoms, double merge_tol)
    : atoms_(std::move(atoms)), merge_tol_(merge_tol) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });
}

double WorkAtomDistribution::total_weight() const {
  return expectation([](double) { return 1.0; });
}

double WorkAtomDistribution::min_weight() const {
  double m = 0.0;
  for (const WorkAtom& a : atoms_) m = std::min(m, a.weight);
  return m;
}

double WorkAtomDistribution::mean() const {
  return expectation([](double w) { return w; });
}

double WorkAtomDistribution::exp_average(double beta) const {
  return expectation([beta](double w) { return std::exp(-beta * w); });
}

std::complex<double> WorkAtomDistribution::characteristic(double lambda) const {
  std::complex<double> acc{0.0, 0.0};
  for (const WorkAtom& a : atoms_) acc += a.weight * std::polar(1.0, lambda * a.work);
  return acc;
}

ComplexMatrixd energy_basis_density(const SystemState& rho0, const HermitianOperatord& h0) {
  if (rho0.dim() != h0.dim()) throw DimensionMismatch("state and Hamiltonian dimensions differ");
  return h0.to_eigenbasis(rho0.density());
}

WorkAtomDistribution tpm_distribution(const SystemState& rho0, const UnitaryOperatord& v,
                                      const HermitianOperatord& h0,
                                      const HermitianOperatord& htau,
                                      const AtomOptions& options) {
  check_dims(rho0, v, h0, htau);
  const ComplexMatrixd rho = energy_basis_density(rho0, h0);
  const ComplexMatrixd vji = transition_amplitudes(v, h0, htau);
  const Eigen::VectorXd& e0 = h0.eigenvalues();
  const Eigen::VectorXd& et = htau.eigenvalues();
  const Eigen::Index d = rho.rows();

  std::vector<Contribution> parts;
  parts.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      parts.push_back({et(j) - e0(i), rho(i, i).real() * std::norm(vji(j, i))});
  return merge(std::move(parts), options.merge_tol.value_or(default_merge_tol(h0, htau)),
               options.prune_tol);
}

WorkAtomDistribution fcs_quasi_distribution(const SystemState& rho0, const UnitaryOperatord& v,
                                            const HermitianOperatord& h0,
                                            const HermitianOperatord& htau,
                                            const AtomOptions& options) {
  check_dims(rho0, v, h0, htau);
  const ComplexMatrixd rho = energy_basis_density(rho0, h0);
  require_block_diagonal(rho, h0);
  const ComplexMatrixd vji = transition_amplitudes(v, h0, htau);
  const Eigen::VectorXd& e0 = h0.eigenvalues();
  const Eigen::VectorXd& et = htau.eigenvalues();
  const Eigen::Index d = rho.rows();

  std::vector<Contribution> parts;
  parts.reserve(static_cast<std::size_t>(d * d * d));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index j = 0; j < d; ++j) {
        // V^dag_kj = conj(V_jk)
        const std::complex<double> w = rho(i, k) * std::conj(vji(j, k)) * vji(j, i);
        parts.push_back({et(j) - 0.5 * (e0(i) + e0(k)), w});
      }
  return merge(std::move(parts), options.merge_tol.value_or(default_merge_tol(h0, htau)),
               options.prune_tol);
}

std::complex<double> characteristic_function(const SystemState& rho0, const UnitaryOperatord& v,
                                             const HermitianOperatord& h0,
                                             const HermitianOperatord& htau, double lambda) {
  return fcs_quasi_distribution(rho0, v, h0, htau).characteristic(lambda);
}

std::complex<double> characteristic_function_trace(const SystemState& rho0,
                                                   const UnitaryOperatord& v,
                                                   const HermitianOperatord& h0,
                                                   const HermitianOperatord& htau,
                                                   double lambda) {
  check_dims(rho0, v, h0, htau);
  using C = std::complex<double>;
  const ComplexMatrixd half = matrix_function(h0, [lambda](double e) {
    return std::polar(1.0, -0.5 * lambda * e);
  });
  const ComplexMatrixd forward = matrix_function(htau, [lambda](double e) {
    return std::polar(1.0, lambda * e);
  });
  const ComplexMatrixd& u = v.matrix();
  const C tr = (half * rho0.density() * half * u.adjoint() * forward * u).trace();
  return tr;
}

void GaussianPointer::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("pointer sigma must be finite and > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("pointer coupling lambda must be finite and > 0");
  if (!std::isfinite(x0)) throw InvalidArgument("pointer x0 must be finite");
}

double GaussianPointer::amplitude(double x) const {
  const double u = x - x0;
  return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
         std::exp(-u * u / (4.0 * sigma * sigma));
}

double PointerDensity::normalization() const {
  return integrate([](double) { return 1.0; });
}

double PointerDensity::mean_position() const {
  return integrate([](double x) { return x; });
}

double PointerDensity::mass_between(double a, double b) const {
  double acc = 0.0;
  for (Eigen::Index n = 0; n + 1 < grid.size(); ++n) {
    if (grid(n) < a || grid(n + 1) > b) continue;
    acc += 0.5 * (grid(n + 1) - grid(n)) * (density(n) + density(n + 1));
  }
  return acc;
}

PointerDensity pointer_distribution(const SystemState& rho0, const UnitaryOperatord& v,
                                    const HermitianOperatord& h0, const HermitianOperatord& htau,
                                    const GaussianPointer& pointer, const GridSpec& spec) {
  check_dims(rho0, v, h0, htau);
  pointer.validate();
  if (pointer.x0 != 0.0)
    throw InvalidArgument("pointer_distribution requires a pointer centred at x0 = 0");
  if (spec.points < 2) throw InvalidArgument("pointer grid needs at least two points");

  const ComplexMatrixd rho = energy_basis_density(rho0, h0);
  const ComplexMatrixd vji = transition_amplitudes(v, h0, htau);
  const Eigen::VectorXd& e0 = h0.eigenvalues();
  const Eigen::VectorXd& et = htau.eigenvalues();
  const Eigen::Index d = rho.rows();
  const double sigma = pointer.sigma;
  const double lambda = pointer.lambda;

  // The path i -> j moves the pointer to -lambda (e^tau_j - e^0_i).
  double lo_shift = 0.0, hi_shift = 0.0;
  bool first = true;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double s = -lambda * (et(j) - e0(i));
      lo_shift = first ? s : std::min(lo_shift, s);
      hi_shift = first ? s : std::max(hi_shift, s);
      first = false;
    }
  const double x_min = spec.x_min.value_or(lo_shift - spec.margin_sigmas * sigma);
  const double x_max = spec.x_max.value_or(hi_shift + spec.margin_sigmas * sigma);
  if (!(x_max > x_min)) throw InvalidArgument("pointer grid bounds must satisfy x_min < x_max");

  const double h = (x_max - x_min) / static_cast<double>(spec.points - 1);
  if (h > sigma)
    throw GridTooCoarse("pointer grid spacing " + std::to_string(h) + " exceeds sigma " +
                        std::to_string(sigma));

  // Every (i, j, k) term is a Gaussian of variance sigma^2 centred between
  // the two shifts, damped by the overlap of the two wavepackets.
  double outside = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) {
      const double de = e0(i) - e0(k);
      const double overlap = std::exp(-lambda * lambda * de * de / (8.0 * sigma * sigma));
      for (Eigen::Index j = 0; j < d; ++j) {
        const double c = (rho(i, k) * std::conj(vji(j, k)) * vji(j, i)).real() * overlap;
        const double centre = -lambda * (et(j) - 0.5 * (e0(i) + e0(k)));
        const double scale = sigma * std::numbers::sqrt2;
        outside += c * 0.5 *
                   (std::erfc((x_max - centre) / scale) + std::erfc((centre - x_min) / scale));
      }
    }
  if (std::abs(outside) > 1e-8)
    throw GridTooNarrow("pointer grid misses probability mass " + std::to_string(outside));

  PointerDensity out;
  out.pointer = pointer;
  out.grid.resize(static_cast<Eigen::Index>(spec.points));
  out.density.resize(static_cast<Eigen::Index>(spec.points));
  ComplexVectord u(d);
  for (Eigen::Index n = 0; n < out.grid.size(); ++n) {
    const double x = x_min + h * static_cast<double>(n);
    out.grid(n) = x;
    double acc = 0.0;
    // Sum_j of u^T rho conj(u), u_i = V_ji phi(x + lambda e_ji): a PSD quadratic form.
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i)
        u(i) = vji(j, i) * pointer.amplitude(x + lambda * (et(j) - e0(i)));
      acc += (u.transpose() * rho * u.conjugate()).value().real();
    }
    out.density(n) = acc;
  }
  return out;
}

} // namespace workstats
