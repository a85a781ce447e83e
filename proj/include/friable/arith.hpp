#ifndef FRIABLE_ARITH_HPP
#define FRIABLE_ARITH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "friable/polymod.hpp"
#include "friable/specfn.hpp"

namespace friable {
namespace arith {

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;
};

// Sieve of Eratosthenes, exact. Throws beyond the memory budget.
PrimeTable primes_up_to(std::uint64_t limit);

struct EnumBudget {
  std::uint64_t max_elements = 10'000'000;       // stored enumeration
  std::uint64_t max_nodes = 4'000'000'000ULL;    // streaming traversal
};

// Declarative nonnegative multiplicative function, given by prime-power
// values. Restrictions are carried as a set of excluded primes.
class MultiplicativeSpec {
 public:
  enum class Kind { kTauKappa, kSquarefreeUniform, kPolyDensity, kTable };

  static MultiplicativeSpec tau_kappa(double kappa);
  static MultiplicativeSpec squarefree_uniform(double c);
  static MultiplicativeSpec poly_density(sieve::Polynomial g);
  static MultiplicativeSpec table(
      std::map<std::pair<std::uint64_t, unsigned>, double> entries);

  Kind kind() const { return kind_; }
  double eta() const { return eta_; }
  int series_cutoff() const { return series_cutoff_; }
  MultiplicativeSpec& set_eta(double eta);
  MultiplicativeSpec& set_series_cutoff(int cutoff);

  double kappa_param() const { return kappa_; }   // tau_kappa kind
  double c_param() const { return c_; }           // squarefree_uniform kind
  const sieve::Polynomial& poly() const { return poly_; }
  const std::map<std::pair<std::uint64_t, unsigned>, double>& entries() const {
    return entries_;
  }
  const std::vector<std::uint64_t>& excluded_primes() const {
    return excluded_;
  }

  // f(p^nu); f(p^0) = 1. Zero when p is excluded by a restriction.
  double value(std::uint64_t p, unsigned nu) const;

  // Largest nu with an explicit entry at p (table kind; 0 otherwise).
  unsigned table_max_nu(std::uint64_t p) const;

  bool squarefree_supported() const;

  // f_m: zero on prime powers dividing m.
  MultiplicativeSpec restricted(std::uint64_t m) const;

 private:
  MultiplicativeSpec() = default;
  Kind kind_ = Kind::kTable;
  double kappa_ = 1.0;
  double c_ = 1.0;
  sieve::Polynomial poly_;
  std::map<std::pair<std::uint64_t, unsigned>, double> entries_;
  std::vector<std::uint64_t> excluded_;  // sorted
  double eta_ = 0.25;
  int series_cutoff_ = 40;
};

// f(n) as the product of f(p^nu) over the factorization; f(1) = 1.
double f_value(const MultiplicativeSpec& spec, std::uint64_t n);

// Ascending y-friable integers <= x (P(1) = 1), by prime-power products.
std::vector<std::uint64_t> enumerate_friable(double x, double y,
                                             const EnumBudget& budget = {});

// psi_f(x,y) = sum_{n in S(x,y)} f(n)/n, exact, compensated.
double psi_f(double x, double y, const MultiplicativeSpec& spec,
             const EnumBudget& budget = {});

// Psi_f(x,y) = sum_{n in S(x,y)} f(n).
double big_psi_f(double x, double y, const MultiplicativeSpec& spec,
                 const EnumBudget& budget = {});

// F(1,y): Euler product of local factors sum_nu f(p^nu)/p^nu over p <= y,
// with certified geometric tails; relative error < 1e-12.
double f1y(double y, const MultiplicativeSpec& spec);

// psi_f^*(x,y) = F(1,y) - psi_f(x,y), clamped at 0 within floating residue.
double psi_f_star(double x, double y, const MultiplicativeSpec& spec,
                  const EnumBudget& budget = {});

// r_f(z) = sum_{p<=z} f(p) log p / p - kappa log z; zero for z <= 1.
double r_f(double z, Kappa kappa, const MultiplicativeSpec& spec);

// Z_j(y;f) = 1 + sum_{p<=y} f(p)^2 (log p)^j / p^2 for j = 1, 2.
std::pair<double, double> z_moments(double y, const MultiplicativeSpec& spec);

// alpha_kappa(x,y) = 1 - xi_kappa(u)/log y.
double alpha_kappa(double x, double y, Kappa kappa);

// Rankin bound x^{sigma-1} exp(K_sigma + sum_{p<=y} f(p)/p^sigma) at
// sigma = alpha_kappa; always >= psi_f_star.
double rankin_bound(double x, double y, Kappa kappa,
                    const MultiplicativeSpec& spec);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
};

// Exact verification of the star-form functional equation for squarefree-
// supported specs. Throws for infinite-support specs.
IdentityCheck verify_star_equation(double x, double y, Kappa kappa,
                            const MultiplicativeSpec& spec,
                            const EnumBudget& budget = {});

// Exact verification of the initial (y = x) functional equation.
IdentityCheck verify_initial_equation(double x, Kappa kappa,
                            const MultiplicativeSpec& spec,
                            const EnumBudget& budget = {});

struct Envelopes {
  double thm31 = 0.0;  // u xi_kappa(u) / log y (exponent, B-free)
  double thm32 = 0.0;  // min(1, ...) two-sided envelope
  double thm_a = 0.0;  // e^{-h_B(u)} / log y (c_kappa A factor set to 1)
  double thm_b = 0.0;  // u e^{-h_B(u)} / log y
};

Envelopes envelopes(double x, double y, Kappa kappa,
                    const MultiplicativeSpec& spec, double b_const);

struct HypothesisReport {
  double a_bilateral = 0.0;   // sup_z |r_f(z)| over the jump grid
  double a_unilateral = 0.0;  // sup_{z>=w} (r_f(z) - r_f(w))
  double c_sum = 0.0;         // prime-power moderation sum
  double z1 = 1.0;
  double z2 = 1.0;
};

// Measures the sieve-hypothesis constants on the exact jump grid
// z in {p-, p : p prime <= z_max}; r_f is decreasing between jumps so the
// suprema are exact.
HypothesisReport hypothesis_report(const MultiplicativeSpec& spec, Kappa kappa,
                                   double z_max);

struct FriableSumReport {
  double x = 1.0;
  double y = 2.0;
  double u = 0.0;
  double psi = 0.0;
  double f1y = 0.0;
  double psi_star = 0.0;
  double lambda_u = 0.0;
  double deviation = 0.0;  // psi_star / (f1y * lambda_u)
  double envelope_thm31 = 0.0;
  double envelope_thm32 = 0.0;
};

FriableSumReport friable_report(double x, double y,
                                const MultiplicativeSpec& spec, Kappa kappa,
                                const specfn::RhoTable& rho,
                                const EnumBudget& budget = {});

struct CkappaEstimate {
  double value = 0.0;
  double error_bar = 0.0;  // reported, not asserted
};

// C_kappa(f) = prod_p (1-1/p)^kappa sum_nu f(p^nu)/p^nu, truncated at p_cut
// with a logarithmic tail estimate from the measured r_f decay.
CkappaEstimate c_kappa_f(const MultiplicativeSpec& spec, Kappa kappa,
                         std::uint64_t p_cut = 1'000'000);

}  // namespace arith
}  // namespace friable

#endif  // FRIABLE_ARITH_HPP
