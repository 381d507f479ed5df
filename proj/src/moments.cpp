#include "workstats/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "workstats/quadrature.hpp"

namespace workstats {

namespace {

constexpr double kStateConsistencyTol = 1e-10;

bool has_gibbs_form(const SystemState& s) {
  return s.kind() == StateKind::ThermalMixed || s.kind() == StateKind::CoherentPure;
}

void check_dims(const SystemState& s, const UnitaryOperatord& v, const HermitianOperatord& h0) {
  if (s.dim() != v.dim() || s.dim() != h0.dim())
    throw DimensionMismatch("state, drive and Hamiltonian must share one dimension");
}

void check_beta_matches(const SystemState& s, double beta) {
  if (s.beta() && std::abs(*s.beta() - beta) > 1e-12 * std::max(1.0, std::abs(beta)))
    throw InvalidArgument("beta " + std::to_string(beta) +
                          " differs from the beta the state was built at (" +
                          std::to_string(*s.beta()) + ")");
}

// exp(-lambda^2 (e_i - e_k)^2 / (8 sigma^2)) for every (i, k).
Eigen::MatrixXd overlap_damping(const Eigen::VectorXd& e, const GaussianPointer& p) {
  const Eigen::Index d = e.size();
  Eigen::MatrixXd out(d, d);
  const double a = p.lambda * p.lambda / (8.0 * p.sigma * p.sigma);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) out(i, k) = std::exp(-a * (e(i) - e(k)) * (e(i) - e(k)));
  return out;
}

// sum_{k != i} M(k, i) * damping(i, k)
std::complex<double> off_diagonal_sum(const ComplexMatrixd& m, const Eigen::MatrixXd* damping) {
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < m.cols(); ++i)
    for (Eigen::Index k = 0; k < m.rows(); ++k)
      if (k != i) acc += m(k, i) * (damping ? (*damping)(i, k) : 1.0);
  return acc;
}

void require_pointer_at_origin(const GaussianPointer& p) {
  p.validate();
  if (p.x0 != 0.0) throw InvalidArgument("pointer averages assume x0 = 0");
}

// Sum_ik rho_ik exp(beta (e_i + e_k)/2) (V^dag exp(-beta H) V)_ki damping_ik, in the H0 basis.
double general_exp_work(const ComplexMatrixd& rho, const ComplexMatrixd& vji,
                        const Eigen::VectorXd& e, double beta, const Eigen::MatrixXd* damping) {
  const Eigen::Index d = e.size();
  const Eigen::VectorXd boltz = (-beta * e.array()).exp().matrix();
  const ComplexMatrixd tilted = vji.adjoint() * boltz.cast<std::complex<double>>().asDiagonal() * vji;
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      acc += rho(i, k) * std::exp(0.5 * beta * (e(i) + e(k))) * tilted(k, i) *
             (damping ? (*damping)(i, k) : 1.0);
  return acc.real();
}

} // namespace

ComplexMatrixd initial_coherences(const SystemState& state, const HermitianOperatord& h0) {
  if (state.dim() != h0.dim()) throw DimensionMismatch("state and Hamiltonian dimensions differ");
  const ComplexMatrixd stored = h0.to_eigenbasis(state.density());
  if (!has_gibbs_form(state)) return stored;

  const Eigen::VectorXd p = boltzmann_weights(h0, *state.beta());
  const Eigen::Index d = h0.dim();
  ComplexMatrixd rho = ComplexMatrixd::Zero(d, d);
  if (state.kind() == StateKind::ThermalMixed) {
    for (Eigen::Index i = 0; i < d; ++i) rho(i, i) = p(i);
  } else {
    const Eigen::VectorXd& phi = *state.phases();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index k = 0; k < d; ++k)
        rho(i, k) = std::polar(std::sqrt(p(i) * p(k)), phi(i) - phi(k));
  }
  if (max_abs(rho - stored) > kStateConsistencyTol)
    throw InvalidState("state does not match the Gibbs form of this Hamiltonian");
  return rho;
}

ComplexMatrixd evolved_phase_basis(const SystemState& state, const UnitaryOperatord& v,
                                   const HermitianOperatord& h0) {
  check_dims(state, v, h0);
  if (!has_gibbs_form(state))
    throw InvalidState("the evolved phase basis needs a thermal or coherent-Gibbs state");
  initial_coherences(state, h0);
  ComplexMatrixd basis = v.matrix() * h0.eigenvectors();
  if (state.phases()) {
    const Eigen::VectorXd& phi = *state.phases();
    for (Eigen::Index i = 0; i < basis.cols(); ++i) basis.col(i) *= std::polar(1.0, phi(i));
  }
  return basis;
}

double avg_exp_work_p1(const SystemState& state, const UnitaryOperatord& v,
                       const HermitianOperatord& h0, double beta) {
  check_dims(state, v, h0);
  check_beta_matches(state, beta);
  if (!has_gibbs_form(state)) {
    const ComplexMatrixd rho = initial_coherences(state, h0);
    return general_exp_work(rho, transition_amplitudes(v, h0, h0), h0.eigenvalues(), beta,
                            nullptr);
  }
  const ComplexMatrixd bar = evolved_phase_basis(state, v, h0);
  const ComplexMatrixd gibbs = bar.adjoint() * thermal_state(h0, beta).density() * bar;
  if (state.kind() == StateKind::ThermalMixed) return gibbs.trace().real();
  return 1.0 + off_diagonal_sum(gibbs, nullptr).real();
}

JeDeviation je_deviation_bound(const SystemState& state, const UnitaryOperatord& v,
                               const HermitianOperatord& h0, double beta) {
  if (!has_gibbs_form(state))
    throw InvalidState("je_deviation_bound needs a thermal or coherent-Gibbs state");
  const double avg = avg_exp_work_p1(state, v, h0, beta);
  const ComplexMatrixd bar = evolved_phase_basis(state, v, h0);
  return {std::abs(avg - 1.0), l1_coherence(thermal_state(h0, beta).density(), bar)};
}

WorkAverages avg_work_p1(const SystemState& state, const UnitaryOperatord& v,
                         const HermitianOperatord& h0) {
  check_dims(state, v, h0);
  const ComplexMatrixd rho = initial_coherences(state, h0);
  const ComplexMatrixd vji = transition_amplitudes(v, h0, h0);
  const Eigen::VectorXd& e = h0.eigenvalues();
  const Eigen::Index d = e.size();

  WorkAverages out;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out.classical_part += rho(i, i).real() * (e(j) - e(i)) * std::norm(vji(j, i));

  std::complex<double> quantum{0.0, 0.0};
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) {
      if (i == k) continue;
      for (Eigen::Index j = 0; j < d; ++j)
        quantum += rho(i, k) * (e(j) - 0.5 * (e(i) + e(k))) * std::conj(vji(j, k)) * vji(j, i);
    }
  out.quantum_part = quantum.real();
  out.mean_work = out.classical_part + out.quantum_part;
  if (state.beta()) {
    out.exp_work = avg_exp_work_p1(state, v, h0, *state.beta());
    out.je_deviation = *out.exp_work - 1.0;
  }
  return out;
}

double gaussian_tilted_overlap(double eps_ji, double eps_jk, const GaussianPointer& pointer,
                               double beta, OverlapMoment moment) {
  pointer.validate();
  const double s = pointer.sigma / pointer.lambda;
  const double centre = 0.5 * (eps_ji + eps_jk);
  const double de = eps_jk - eps_ji;
  const double log_zeroth = -de * de / (8.0 * s * s) - beta * centre + 0.5 * beta * beta * s * s;
  const double zeroth = std::exp(log_zeroth);
  if (moment == OverlapMoment::Zeroth) return zeroth;
  return zeroth * (centre - beta * s * s);
}

double gaussian_tilted_overlap_quadrature(double eps_ji, double eps_jk,
                                          const GaussianPointer& pointer, double beta,
                                          OverlapMoment moment) {
  pointer.validate();
  const double lambda = pointer.lambda;
  const GaussianPointer centred{0.0, pointer.sigma, lambda};
  const auto base = [&](double w) {
    return lambda * std::exp(-beta * w) * centred.amplitude(lambda * (eps_ji - w)) *
           centred.amplitude(lambda * (eps_jk - w));
  };
  const auto integrand = [&](double w) {
    return moment == OverlapMoment::First ? w * base(w) : base(w);
  };
  // Cover both wavepackets and the tilt.
  const double s = pointer.sigma / lambda;
  const double reach = 16.0 * s + std::abs(beta) * s * s;
  const double m1 = std::min(eps_ji, eps_jk);
  const double m2 = std::max(eps_ji, eps_jk);
  const double a = m1 - reach;
  const double b = m2 + reach;
  // Integrate relative to the peak so far-apart packets do not sink into denormals.
  const double peak = std::clamp(0.5 * (eps_ji + eps_jk) - beta * s * s, a, b);
  const double ref = base(peak);
  const double scale = ref > 0.0 ? ref : 1.0;
  const auto scaled = [&](double w) { return integrand(w) / scale; };
  std::vector<double> cuts{a, m1, peak, m2, b};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < cuts.size(); ++n)
    if (cuts[n + 1] > cuts[n]) total += integrate_adaptive(scaled, cuts[n], cuts[n + 1], 1e-13).value;
  return total * scale;
}

double pointer_exp_work_reference(const GaussianPointer& pointer, double beta) {
  pointer.validate();
  const double s = pointer.sigma / pointer.lambda;
  return std::exp(0.5 * beta * beta * s * s);
}

LogScaled avg_exp_work_p2(const SystemState& state, const UnitaryOperatord& v,
                          const HermitianOperatord& h0, const GaussianPointer& pointer,
                          double beta) {
  check_dims(state, v, h0);
  check_beta_matches(state, beta);
  require_pointer_at_origin(pointer);
  const Eigen::MatrixXd damping = overlap_damping(h0.eigenvalues(), pointer);

  double bracket = 0.0;
  if (!has_gibbs_form(state)) {
    bracket = general_exp_work(initial_coherences(state, h0), transition_amplitudes(v, h0, h0),
                               h0.eigenvalues(), beta, &damping);
  } else {
    const ComplexMatrixd bar = evolved_phase_basis(state, v, h0);
    const ComplexMatrixd gibbs = bar.adjoint() * thermal_state(h0, beta).density() * bar;
    bracket = state.kind() == StateKind::ThermalMixed
                  ? gibbs.trace().real()
                  : 1.0 + off_diagonal_sum(gibbs, &damping).real();
  }
  if (!(bracket > 0.0))
    throw NumericalError("pointer exponentiated work lost positivity: " + std::to_string(bracket));

  const double s = pointer.sigma / pointer.lambda;
  const double log_value = 0.5 * beta * beta * s * s + std::log(bracket);
  if (log_value > std::log(std::numeric_limits<double>::max()))
    throw Overflow("<exp(-beta W)> = exp(" + std::to_string(log_value) +
                   ") exceeds the double range");
  return {std::exp(log_value), log_value};
}

WorkAverages avg_work_p2(const SystemState& state, const UnitaryOperatord& v,
                         const HermitianOperatord& h0, const GaussianPointer& pointer) {
  check_dims(state, v, h0);
  require_pointer_at_origin(pointer);
  const Eigen::VectorXd& e = h0.eigenvalues();
  const Eigen::MatrixXd damping = overlap_damping(e, pointer);
  const ComplexMatrixd& h = h0.matrix();

  WorkAverages out;
  if (!has_gibbs_form(state)) {
    const ComplexMatrixd rho = initial_coherences(state, h0);
    const ComplexMatrixd vji = transition_amplitudes(v, h0, h0);
    const ComplexMatrixd heis = vji.adjoint() * e.cast<std::complex<double>>().asDiagonal() * vji;
    std::complex<double> quantum{0.0, 0.0};
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      out.classical_part += (rho(i, i) * (heis(i, i) - e(i))).real();
      for (Eigen::Index k = 0; k < e.size(); ++k)
        if (k != i) quantum += rho(i, k) * heis(k, i) * damping(i, k);
    }
    out.quantum_part = quantum.real();
  } else {
    const double beta = *state.beta();
    const ComplexMatrixd gibbs = thermal_state(h0, beta).density();
    const ComplexMatrixd& u = v.matrix();
    out.classical_part = ((u * gibbs * u.adjoint() - gibbs) * h).trace().real();
    if (state.kind() == StateKind::CoherentPure) {
      const ComplexMatrixd bar = evolved_phase_basis(state, v, h0);
      const ComplexMatrixd energy = bar.adjoint() * h * bar;
      const Eigen::VectorXd p = boltzmann_weights(h0, beta);
      std::complex<double> quantum{0.0, 0.0};
      for (Eigen::Index i = 0; i < e.size(); ++i)
        for (Eigen::Index k = 0; k < e.size(); ++k)
          // exp(-beta (e_i + e_k)/2) / Z == sqrt(p_i p_k)
          if (k != i) quantum += energy(k, i) * std::sqrt(p(i) * p(k)) * damping(i, k);
      out.quantum_part = quantum.real();
    }
  }
  out.mean_work = out.classical_part + out.quantum_part;
  if (state.beta()) {
    // The mean stays finite when the exponential average leaves the double range.
    try {
      out.exp_work = avg_exp_work_p2(state, v, h0, pointer, *state.beta()).value;
      out.je_deviation = *out.exp_work - pointer_exp_work_reference(pointer, *state.beta());
    } catch (const Overflow&) {
    }
  }
  return out;
}

double exp_work_from_pointer(const PointerDensity& density, double beta) {
  const GaussianPointer& p = density.pointer;
  return density.integrate([&](double x) { return std::exp(-beta * p.work_from_position(x)); });
}

double mean_work_from_pointer(const PointerDensity& density) {
  const GaussianPointer& p = density.pointer;
  return density.integrate([&](double x) { return p.work_from_position(x); });
}

} // namespace workstats
