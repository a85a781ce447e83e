#ifndef FRIABLE_SIEVE_HPP
#define FRIABLE_SIEVE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "friable/arith.hpp"
#include "friable/polymod.hpp"
#include "friable/specfn.hpp"

namespace friable {
namespace sieve {

using PrimePower = std::pair<std::uint64_t, unsigned>;  // (p, nu), nu >= 1

// Residue classes W(p^nu) to be sifted. Classes at distinct powers of the
// same prime must be disjoint as sets of integers.
class ResidueSystem {
 public:
  ResidueSystem() = default;
  explicit ResidueSystem(std::map<PrimePower, std::vector<std::uint64_t>> w);

  const std::map<PrimePower, std::vector<std::uint64_t>>& entries() const {
    return entries_;
  }
  bool defined(std::uint64_t p, unsigned nu) const;
  const std::vector<std::uint64_t>* classes(std::uint64_t p, unsigned nu) const;

 private:
  std::map<PrimePower, std::vector<std::uint64_t>> entries_;
};

// Multiplicative density w(p^nu) >= 0 with the partial survivals
// theta(p^nu) = 1 - sum_{mu<=nu} w(p^mu)/p^mu. Admissibility demands
// sum_nu w(p^nu)/p^nu < 1 for every p.
class DensityFunction {
 public:
  DensityFunction() = default;
  explicit DensityFunction(std::map<PrimePower, double> w);

  const std::map<PrimePower, double>& entries() const { return w_; }
  double w(std::uint64_t p, unsigned nu) const;
  // w extended multiplicatively to arbitrary d >= 1.
  double w_multiplicative(std::uint64_t d) const;

  // prime powers with positive density, ascending by value p^nu
  const std::vector<PrimePower>& support() const { return support_; }

 private:
  std::map<PrimePower, double> w_;
  std::vector<PrimePower> support_;
};

// theta(p^nu); exact partial sum, theta(p^0) = 1. Throws on inadmissible w.
double theta(const DensityFunction& density, std::uint64_t p, unsigned nu);

// g(p^nu) = {theta(p^{nu-1}) - theta(p^nu)} theta(p^nu)/theta(p^{nu-1}).
double g_val(const DensityFunction& density, std::uint64_t p, unsigned nu);

// two-variable t*(p^mu, p^nu): 1 if mu = nu; 0 if nu > mu;
// +-{theta(p^{mu-1}) - theta(p^mu)}/theta(p^{mu-1}) for 0 < nu < mu (plus)
// and nu = 0 (minus). Extended multiplicatively by t_star_general.
double t_star(const DensityFunction& density, std::uint64_t p, unsigned mu,
              unsigned nu);

// epsilon(d,d') = 1 iff every prime has equal exponents in d and d', or one
// of the two exponents is zero.
int epsilon(std::uint64_t d, std::uint64_t d_prime);

struct SieveInstance {
  std::vector<std::int64_t> sequence;     // the multiset A
  std::vector<std::uint64_t> prime_set;   // P
  double z = 2.0;
  double d_cutoff = 2.0;                  // level D > 1
  double x_mass = 0.0;                    // expected mass X
  DensityFunction density;
  ResidueSystem residues;
  // remainders may be supplied instead of computed from the sequence
  std::optional<std::map<std::uint64_t, double>> supplied_remainders;

  void validate() const;  // disjointness, admissibility, D > 1
};

struct SieveReport {
  double main_term = 0.0;       // X / psi_f(D, z)
  double remainder = 0.0;       // sum 3^{omega(m)} |r_m|
  double bound = 0.0;           // main_term + remainder
  std::int64_t brute_count = -1;
  double weights_max_abs = 0.0;
};

// Optimal Selberg weight lambda*_d; 1 at d = 1, 0 for d > D.
double lambda_star(const SieveInstance& instance, std::uint64_t d);

// X / psi_f(D,z) with f(p^nu) = p^nu/theta(p^nu) - p^nu/theta(p^{nu-1}).
double main_term(const SieveInstance& instance);

// The multiplicative spec f derived from the instance densities.
arith::MultiplicativeSpec sieve_density_spec(const SieveInstance& instance);

// sum over z-friable m <= D^2 of 3^{omega(m)} |r_m|, remainders exact from
// the sequence (or supplied).
double remainder_bound(const SieveInstance& instance);

// exact S(A, P; z) by residue membership of every element
std::int64_t brute_count(const SieveInstance& instance);

SieveReport sieve_bound(const SieveInstance& instance, bool with_brute = true);

// all z-friable d <= limit composed of support prime powers (lambda/remainder
// index set), ascending
std::vector<std::uint64_t> support_lattice(const SieveInstance& instance,
                                           double limit);

// quadratic form sum_{d,d'<=D} l*_d l*_{d'} eps(d,d') w([d,d'])/[d,d'];
// equals 1/psi_f(D,z) (the identity behind the upper bound).
double quadratic_form(const SieveInstance& instance);

struct PolySieveReport {
  SieveReport report;
  double w_qg = 1.0;        // W(q;G) = prod (1 - rho(p^nu;G)/p^nu)
  bool degenerate = false;  // some p^nu || q with G = 0 mod p^nu
  std::map<std::uint64_t, std::uint64_t> rho_values;  // p^nu -> rho(p^nu;G)
};

// Sift {n in I : p^nu || q => p^nu does not divide G(n)}.
// D defaults to sqrt(N).
PolySieveReport polynomial_interval_sieve(std::int64_t lo, std::int64_t hi,
                                     std::uint64_t q, const Polynomial& g,
                                     double d_cutoff = 0.0);

struct LevelEnvelope {
  double v = 0.0;
  double j_kappa_v = 0.0;
  double lambda_plus = 0.0;  // lambda_kappa(v) v log(1+v)
};

// v = min{log D/(s log z), 3 log D/(s eta log log D)} and the associated
// j_kappa(v), lambda+_kappa(v) (free constants reported normalized to 1).
LevelEnvelope sieve_level_envelope(double d_cutoff, double z, int s, double eta,
                               Kappa kappa);

}  // namespace sieve
}  // namespace friable

#endif  // FRIABLE_SIEVE_HPP
