#include "workstats/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>

#include "workstats/moments.hpp"
#include "workstats/protocols.hpp"
#include "workstats/random.hpp"
#include "workstats/states.hpp"

namespace workstats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Instance {
  HermitianOperatord h;
  UnitaryOperatord v;
  double beta;
  Eigen::VectorXd phases;
};

Instance draw_instance(Rng& rng) {
  const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 3);
  HermitianOperatord h(random_hermitian(d, rng));
  UnitaryOperatord v(haar_unitary(d, rng));
  const double beta = uniform(rng, 0.0, 2.0);
  Eigen::VectorXd phases = random_phases(d, rng);
  return {std::move(h), std::move(v), beta, std::move(phases)};
}

double atomwise_error(const WorkAtomDistribution& a, const WorkAtomDistribution& b) {
  if (a.size() != b.size()) return kInf;
  double err = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (std::abs(a.atoms()[n].work - b.atoms()[n].work) > std::max(a.merge_tol(), b.merge_tol()))
      return kInf;
    err = std::max(err, std::abs(a.atoms()[n].weight - b.atoms()[n].weight));
  }
  return err;
}

double relative(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

class Suite {
public:
  void record(const std::string& name, double tolerance, double error) {
    auto it = std::find_if(results_.begin(), results_.end(),
                           [&](const CheckResult& r) { return r.name == name; });
    if (it == results_.end()) {
      results_.push_back({name, 0, 0.0, tolerance});
      it = results_.end() - 1;
    }
    ++it->trials;
    // NaN propagates as a failure.
    if (std::isnan(error) || error > it->max_error) it->max_error = std::isnan(error) ? kInf : error;
  }

  // Runs `check`, turning a library exception into a failed trial.
  void guarded(const std::string& name, double tolerance, const std::function<double()>& check) {
    double error = kInf;
    try {
      error = check();
    } catch (const std::exception&) {
      error = kInf;
    }
    record(name, tolerance, error);
  }

  std::vector<CheckResult> take() { return std::move(results_); }

private:
  std::vector<CheckResult> results_;
};

} // namespace

std::vector<CheckResult> run_selfcheck(std::uint64_t seed, int trials) {
  Rng rng(seed);
  Suite suite;
  for (int t = 0; t < trials; ++t) {
    const Instance in = draw_instance(rng);
    const HermitianOperatord& h = in.h;
    const UnitaryOperatord& v = in.v;
    const double beta = in.beta;
    const double lambda_probe = uniform(rng, -5.0, 5.0);
    const double sigma = uniform(rng, 0.25, 1.0);
    const GaussianPointer pointer{0.0, sigma, uniform(rng, 0.5, 2.0)};
    const GaussianPointer overlap_pointer{0.0, pointer.sigma * pointer.lambda, pointer.lambda};
    const double eps_ji = uniform(rng, -2.0, 2.0);
    const double eps_jk = uniform(rng, -2.0, 2.0);

    suite.guarded("spectral reconstruction", 1e-10, [&] {
      const ComplexMatrixd rebuilt =
          matrix_function(h, [](double e) { return e; });
      return max_abs(rebuilt - h.matrix());
    });

    const SystemState thermal = thermal_state(h, beta);
    const SystemState coherent = coherent_gibbs_state(h, beta, in.phases);

    suite.guarded("G_lambda: atom sum vs trace form", 1e-10, [&] {
      return std::abs(characteristic_function(coherent, v, h, h, lambda_probe) -
                      characteristic_function_trace(coherent, v, h, h, lambda_probe));
    });
    suite.guarded("quasi-distribution normalization", 1e-10, [&] {
      return std::abs(fcs_quasi_distribution(coherent, v, h, h).total_weight() - 1.0);
    });
    suite.guarded("P1 <exp(-bW)>: closed form vs atoms", 1e-10, [&] {
      return std::abs(avg_exp_work_p1(coherent, v, h, beta) -
                      fcs_quasi_distribution(coherent, v, h, h).exp_average(beta));
    });
    suite.guarded("P1 <W>: closed form vs atoms", 1e-10, [&] {
      return std::abs(avg_work_p1(coherent, v, h).mean_work -
                      fcs_quasi_distribution(coherent, v, h, h).mean());
    });
    suite.guarded("P1 thermal Jarzynski", 1e-10, [&] {
      return std::abs(avg_exp_work_p1(thermal, v, h, beta) - 1.0);
    });
    suite.guarded("thermal quasi-distribution equals TPM", 1e-12, [&] {
      return atomwise_error(fcs_quasi_distribution(thermal, v, h, h),
                            tpm_distribution(thermal, v, h, h));
    });
    suite.guarded("P1 classical part nonnegative", 1e-12, [&] {
      return std::max(0.0, -avg_work_p1(thermal, v, h).classical_part);
    });
    suite.guarded("JE deviation within l1 bound", 1e-10, [&] {
      const JeDeviation dev = je_deviation_bound(coherent, v, h, beta);
      return std::max(0.0, dev.deviation - dev.bound);
    });
    suite.guarded("overlap zeroth: closed vs quadrature", 1e-8, [&] {
      return relative(gaussian_tilted_overlap_quadrature(eps_ji, eps_jk, overlap_pointer, beta,
                                                         OverlapMoment::Zeroth),
                      gaussian_tilted_overlap(eps_ji, eps_jk, overlap_pointer, beta, OverlapMoment::Zeroth));
    });
    suite.guarded("overlap first: closed vs quadrature", 1e-8, [&] {
      const double s = overlap_pointer.sigma / overlap_pointer.lambda;
      const double zeroth =
          gaussian_tilted_overlap(eps_ji, eps_jk, overlap_pointer, beta, OverlapMoment::Zeroth);
      const double closed =
          gaussian_tilted_overlap(eps_ji, eps_jk, overlap_pointer, beta, OverlapMoment::First);
      const double quad = gaussian_tilted_overlap_quadrature(eps_ji, eps_jk, overlap_pointer, beta,
                                                             OverlapMoment::First);
      const double scale = zeroth * (std::abs(0.5 * (eps_ji + eps_jk) - beta * s * s) + s);
      return std::abs(quad - closed) / scale;
    });
    suite.guarded("P2 thermal <exp(-bW)> benchmark", 1e-10, [&] {
      return relative(avg_exp_work_p2(thermal, v, h, pointer, beta).value,
                      pointer_exp_work_reference(pointer, beta));
    });

    // The tilt exp(beta x / lambda) moves mass by beta sigma^2 / lambda, so pad further.
    GridSpec grid;
    grid.margin_sigmas = 10.0 + beta * pointer.sigma / pointer.lambda;
    suite.guarded("pointer density normalization", 1e-6, [&] {
      return std::abs(pointer_distribution(coherent, v, h, h, pointer, grid).normalization() - 1.0);
    });
    suite.guarded("P2 <exp(-bW)>: closed form vs grid", 1e-6, [&] {
      const PointerDensity dens = pointer_distribution(coherent, v, h, h, pointer, grid);
      return relative(exp_work_from_pointer(dens, beta),
                      avg_exp_work_p2(coherent, v, h, pointer, beta).value);
    });
    suite.guarded("P2 <W>: closed form vs grid", 1e-8, [&] {
      const PointerDensity dens = pointer_distribution(coherent, v, h, h, pointer, grid);
      return std::abs(mean_work_from_pointer(dens) - avg_work_p2(coherent, v, h, pointer).mean_work);
    });
  }
  return suite.take();
}

void write_selfcheck_report(std::ostream& out, const std::vector<CheckResult>& results) {
  char line[256];
  std::snprintf(line, sizeof line, "%-42s %7s %12s %10s  %s\n", "check", "trials", "max_error",
                "tolerance", "status");
  out << line;
  for (const CheckResult& r : results) {
    std::snprintf(line, sizeof line, "%-42s %7d %12.3e %10.1e  %s\n", r.name.c_str(), r.trials,
                  r.max_error, r.tolerance, r.passed() ? "PASS" : "FAIL");
    out << line;
  }
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const CheckResult& r) { return !r.passed(); });
  out << (failed == 0 ? "selfcheck: all checks passed\n"
                      : "selfcheck: " + std::to_string(failed) + " check(s) failed\n");
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed(); });
}

} // namespace workstats
