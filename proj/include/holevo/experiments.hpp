#pragma once

// Experiment drivers behind the CLI: the classical-family discontinuity table and
// the seeded invariant suites.

#include <cstdint>
#include <string>
#include <vector>

#include "holevo/capacity.hpp"

namespace holevo {

struct DiscontinuityRow {
  int n = 0;
  double q = 0.0;
  double norm_distance = 0.0;  ///< max over basis inputs of ‖(Φⁿ_q − Φ⁰)(|i><i|)‖₁
  double norm_bound = 0.0;     ///< 3q
  double capacity = 0.0;
  double gap = 0.0;
};

/// q(n) = c_target / log(n+1) with N = 2n input letters. Throws
/// kInvalidArgument when c_target <= 0 or q(n) > 1.
std::vector<DiscontinuityRow> discontinuity_rows(const std::vector<int>& n_list, double c_target,
                                                 const SolverOptions& opts = {});
std::string discontinuity_csv(const std::vector<DiscontinuityRow>& rows);

struct SuiteResult {
  std::string name;
  int cases = 0;
  int passed = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  bool ok() const { return cases > 0 && passed == cases; }
};

/// Names accepted by run_verify, "all" last.
std::vector<std::string> verify_suite_names();

/// Runs one suite (or every suite for "all"). Throws kInvalidArgument for
/// an unknown name.
std::vector<SuiteResult> run_verify(const std::string& suite, std::uint64_t seed, int cases = 1000);

}  // namespace holevo
