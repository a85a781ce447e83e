#ifndef FRIABLE_POLYMOD_HPP
#define FRIABLE_POLYMOD_HPP

#include <cstdint>
#include <vector>

namespace friable {
namespace sieve {

// Integer polynomial, coefficients in ascending degree order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<long long> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<long long>& coeffs() const { return coeffs_; }

  std::uint64_t eval_mod(std::uint64_t x, std::uint64_t m) const;
  Polynomial derivative() const;

 private:
  std::vector<long long> coeffs_;
};

// Residues x mod p^nu with G(x) = 0, in ascending order. Brute force below
// the cap, Hensel lifting (simple roots lift uniquely; singular roots expand
// level by level, at most 20 singular levels) above it.
std::vector<std::uint64_t> poly_roots_mod(std::uint64_t p, unsigned nu,
                                          const Polynomial& g);

// rho(p^nu; G): number of roots of G modulo p^nu. Equals p^nu when G
// vanishes identically modulo p^nu.
std::uint64_t rho_poly(std::uint64_t p, unsigned nu, const Polynomial& g);

// Force one path or the other (used by the cross-oracle tests).
std::uint64_t rho_poly_brute(std::uint64_t p, unsigned nu, const Polynomial& g);
std::uint64_t rho_poly_hensel(std::uint64_t p, unsigned nu, const Polynomial& g);

}  // namespace sieve
}  // namespace friable

#endif  // FRIABLE_POLYMOD_HPP
