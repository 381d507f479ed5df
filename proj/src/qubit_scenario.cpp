#include "workstats/qubit_scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <thread>

#include "workstats/moments.hpp"
#include "workstats/states.hpp"

namespace workstats {

namespace {

// Runs body(n) for n in [0, count) on up to `threads` workers. Each index is
// written by exactly one worker.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t n = 0; n < count; ++n) body(n);
    return;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t n = w; n < count; n += workers) body(n);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace

QubitDrive QubitDrive::make(const Eigen::Vector3d& axis, double delta_angle, double gap) {
  const double norm = axis.norm();
  if (!(norm > 0.0) || !axis.allFinite()) throw InvalidArgument("drive axis must be non-zero");
  if (!(gap > 0.0) || !std::isfinite(gap)) throw InvalidArgument("qubit gap must be > 0");
  if (!std::isfinite(delta_angle)) throw InvalidArgument("drive angle must be finite");
  return {axis / norm, delta_angle, gap};
}

QubitDrive reference_drive() { return QubitDrive::make({0.83, 0.0, 0.55}, 1.0, 1.0); }

HermitianOperatord qubit_hamiltonian(double gap) {
  if (!(gap > 0.0) || !std::isfinite(gap)) throw InvalidArgument("qubit gap must be > 0");
  ComplexMatrixd h = ComplexMatrixd::Zero(2, 2);
  h(0, 0) = -0.5 * gap;
  h(1, 1) = 0.5 * gap;
  return HermitianOperatord(h);
}

UnitaryOperatord su2_unitary(const QubitDrive& drive) {
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  const Eigen::Vector3d& n = drive.axis;
  ComplexMatrixd n_sigma(2, 2);
  n_sigma << C(n.z()), C(n.x()) - i * n.y(),
             C(n.x()) + i * n.y(), C(-n.z());
  const ComplexMatrixd u = std::cos(drive.delta_angle) * ComplexMatrixd::Identity(2, 2) -
                           i * std::sin(drive.delta_angle) * n_sigma;
  return UnitaryOperatord(u);
}

std::string phase_label(double phi) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, phi, std::chars_format::general, 6);
  return "phi=" + std::string(buf, res.ptr);
}

std::vector<BetaSweepRow> sweep_beta(const QubitDrive& drive, const std::vector<double>& phases,
                                     const std::vector<double>& beta_grid, const Readout& readout,
                                     unsigned threads) {
  const HermitianOperatord h = qubit_hamiltonian(drive.gap);
  const UnitaryOperatord v = su2_unitary(drive);
  const std::size_t per_beta = phases.size() + 1;
  std::vector<BetaSweepRow> rows(beta_grid.size() * per_beta);

  parallel_for(rows.size(), threads, [&](std::size_t n) {
    const double beta = beta_grid[n / per_beta];
    const std::size_t slot = n % per_beta;
    const SystemState state =
        slot == 0 ? thermal_state(h, beta)
                  : coherent_gibbs_state(h, beta, Eigen::Vector2d(0.0, phases[slot - 1]));
    WorkAverages avg;
    if (const auto* p = std::get_if<PointerReadout>(&readout)) {
      const GaussianPointer pointer{0.0, p->sigma_ratio * drive.gap, 1.0};
      avg = avg_work_p2(state, v, h, pointer);
    } else {
      avg = avg_work_p1(state, v, h);
    }
    if (!avg.exp_work)
      throw Overflow("<exp(-beta W)> exceeds the double range at beta*gap = " +
                     std::to_string(beta * drive.gap));
    BetaSweepRow& row = rows[n];
    row.beta_delta = beta * drive.gap;
    row.label = slot == 0 ? "thermal" : phase_label(phases[slot - 1]);
    row.exp_work = avg.exp_work.value();
    row.mean_work = avg.mean_work;
    row.je_deviation = avg.je_deviation.value();
    row.bound = je_deviation_bound(state, v, h, beta).bound;
  });
  return rows;
}

std::vector<SigmaSweepRow> sweep_sigma(const QubitDrive& drive, double phi, double beta,
                                       const std::vector<double>& sigma_ratios,
                                       unsigned threads) {
  const HermitianOperatord h = qubit_hamiltonian(drive.gap);
  const UnitaryOperatord v = su2_unitary(drive);
  const SystemState coherent = coherent_gibbs_state(h, beta, Eigen::Vector2d(0.0, phi));
  const SystemState thermal = thermal_state(h, beta);
  std::vector<SigmaSweepRow> rows(sigma_ratios.size());
  parallel_for(rows.size(), threads, [&](std::size_t n) {
    const GaussianPointer pointer{0.0, sigma_ratios[n] * drive.gap, 1.0};
    rows[n] = {sigma_ratios[n], avg_work_p2(coherent, v, h, pointer).mean_work -
                                    avg_work_p2(thermal, v, h, pointer).mean_work};
  });
  return rows;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("log grid needs 0 < lo <= hi");
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> out(points);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t n = 0; n < points; ++n)
    out[n] = std::exp(a + (b - a) * static_cast<double>(n) / static_cast<double>(points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (!(hi >= lo)) throw InvalidArgument("linear grid needs lo <= hi");
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (std::size_t n = 0; n < points; ++n)
    out[n] = lo + (hi - lo) * static_cast<double>(n) / static_cast<double>(points - 1);
  return out;
}

} // namespace workstats
