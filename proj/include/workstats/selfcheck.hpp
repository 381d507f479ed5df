#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace workstats {

struct CheckResult {
  std::string name;
  int trials = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }
};

/// Cross-checks every closed form against its independent route (atom sums,
/// trace forms, quadrature of the pointer density, adaptive quadrature of the
/// Gaussian overlaps) on `trials` random systems drawn from `seed`.
std::vector<CheckResult> run_selfcheck(std::uint64_t seed, int trials);

/// One line per check plus a summary line. Byte-identical for identical results.
void write_selfcheck_report(std::ostream& out, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace workstats
