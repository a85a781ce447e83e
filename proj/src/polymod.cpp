#include "friable/polymod.hpp"

#include <algorithm>
#include <stdexcept>

namespace friable {
namespace sieve {

namespace {

constexpr std::uint64_t kBruteCap = 1'000'000;
constexpr int kSingularDepthCap = 20;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_u64(std::uint64_t p, unsigned nu) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < nu; ++i) {
    if (r > UINT64_MAX / p) throw std::overflow_error("pow_u64 overflow");
    r *= p;
  }
  return r;
}

// a^{-1} mod p for prime p
std::uint64_t inv_mod_prime(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

Polynomial::Polynomial(std::vector<long long> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::uint64_t Polynomial::eval_mod(std::uint64_t x, std::uint64_t m) const {
  if (m == 0) throw std::invalid_argument("eval_mod: zero modulus");
  std::uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    long long c = *it;
    std::uint64_t cm = (c >= 0) ? static_cast<std::uint64_t>(c) % m
                                : m - 1 - ((static_cast<std::uint64_t>(-(c + 1))) % m);
    acc = (mulmod(acc, x % m, m) + cm) % m;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<long long> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    d.push_back(coeffs_[i] * static_cast<long long>(i));
  return Polynomial(std::move(d));
}

namespace {

std::vector<std::uint64_t> roots_brute(std::uint64_t modulus,
                                       const Polynomial& g) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < modulus; ++x)
    if (g.eval_mod(x, modulus) == 0) out.push_back(x);
  return out;
}

std::vector<std::uint64_t> roots_hensel(std::uint64_t p, unsigned nu,
                                        const Polynomial& g) {
  if (p > kBruteCap)
    throw std::invalid_argument("poly_roots_mod: base prime exceeds brute cap");
  Polynomial dg = g.derivative();
  // level-1 roots by scanning mod p
  struct Node {
    std::uint64_t r;
    int singular_depth;
  };
  std::vector<Node> level;
  for (std::uint64_t x = 0; x < p; ++x)
    if (g.eval_mod(x, p) == 0) level.push_back({x, 0});
  std::uint64_t pk = p;
  for (unsigned k = 1; k < nu; ++k) {
    std::uint64_t pk1 = pk * p;  // p^{k+1}; overflow guarded by caller
    std::vector<Node> next;
    for (const Node& node : level) {
      std::uint64_t gp = dg.is_zero() ? 0 : dg.eval_mod(node.r, p);
      if (gp != 0) {
        // simple root: unique lift r - G(r)/G'(r) computed mod p^{k+1}
        std::uint64_t gval = g.eval_mod(node.r, pk1);
        std::uint64_t q = gval / pk;  // G(r) = 0 mod p^k, so q is exact mod p
        std::uint64_t t = mulmod(p - q % p, inv_mod_prime(gp, p), p) % p;
        next.push_back({(node.r + t % p * pk) % pk1, node.singular_depth});
      } else {
        if (node.singular_depth + 1 > kSingularDepthCap)
          throw std::runtime_error(
              "poly_roots_mod: singular-root subtree exceeds depth cap");
        if (g.eval_mod(node.r, pk1) == 0) {
          for (std::uint64_t t = 0; t < p; ++t)
            next.push_back({node.r + t * pk, node.singular_depth + 1});
        }
      }
      if (next.size() > 4'000'000)
        throw std::runtime_error(
            "poly_roots_mod: degenerate polynomial, root set too large");
    }
    level = std::move(next);
    pk = pk1;
  }
  std::vector<std::uint64_t> out;
  out.reserve(level.size());
  for (const Node& n : level) out.push_back(n.r);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::uint64_t> poly_roots_mod(std::uint64_t p, unsigned nu,
                                          const Polynomial& g) {
  if (p < 2 || nu == 0) throw std::invalid_argument("poly_roots_mod: bad modulus");
  std::uint64_t modulus = pow_u64(p, nu);
  if (g.is_zero()) {
    std::vector<std::uint64_t> all(modulus);
    for (std::uint64_t i = 0; i < modulus; ++i) all[i] = i;
    return all;
  }
  if (modulus <= kBruteCap) return roots_brute(modulus, g);
  return roots_hensel(p, nu, g);
}

std::uint64_t rho_poly(std::uint64_t p, unsigned nu, const Polynomial& g) {
  return poly_roots_mod(p, nu, g).size();
}

std::uint64_t rho_poly_brute(std::uint64_t p, unsigned nu, const Polynomial& g) {
  std::uint64_t modulus = pow_u64(p, nu);
  if (g.is_zero()) return modulus;
  return roots_brute(modulus, g).size();
}

std::uint64_t rho_poly_hensel(std::uint64_t p, unsigned nu,
                              const Polynomial& g) {
  if (g.is_zero()) return pow_u64(p, nu);
  return roots_hensel(p, nu, g).size();
}

}  // namespace sieve
}  // namespace friable
