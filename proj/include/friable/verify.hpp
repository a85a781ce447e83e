#ifndef FRIABLE_VERIFY_HPP
#define FRIABLE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "friable/sieve.hpp"

namespace friable {
namespace verify {

struct SuiteRow {
  std::string suite;
  std::string case_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

// Deterministic pseudo-random sieve instance (valid by construction).
sieve::SieveInstance random_instance(std::uint64_t seed);

// Exact functional-equation corpora (star and initial forms).
SuiteResult run_eq73(std::uint64_t seed, int instances = 50);
SuiteResult run_eq82(std::uint64_t seed, int instances = 50);

// Adjoint tail identity u lambda mu = kappa int lambda mu on a grid.
SuiteResult run_adjoint_identity(std::uint64_t seed);

// Selberg quadratic-form identity against 1/psi_f(D,z), D <= 200.
SuiteResult run_quadform(std::uint64_t seed, int instances = 20);

// rho normalization: int rho_kappa = e^{gamma kappa}.
SuiteResult run_normalization(std::uint64_t seed);

// Upper-bound validity: brute count <= bound on randomized instances.
SuiteResult run_sieve_validity(std::uint64_t seed, int instances = 100);

// All suites in a fixed order; names: eq73, eq82, adjoint, quadform,
// normalization, sieve.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace verify
}  // namespace friable

#endif  // FRIABLE_VERIFY_HPP
