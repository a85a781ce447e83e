// Test-only independent oracles. Everything here is deliberately written
// against the definitions, not against the library implementation paths.
#ifndef FRIABLE_TESTS_ORACLES_HPP
#define FRIABLE_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

// Plain bisection for the nonzero root of e^x = 1 + t*x on [lo, hi].
inline double xi_bisect(double t, double lo, double hi) {
  auto g = [t](double x) { return std::expm1(x) - t * x; };
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    if ((g(m) > 0) == (g(hi) > 0))
      hi = m;
    else
      lo = m;
  }
  return 0.5 * (lo + hi);
}

// I(s) by term-wise integration of the exponential series: sum s^k/(k*k!).
inline double big_i_series(double s) {
  double sum = 0.0, sp = 1.0, fact = 1.0;
  for (int k = 1; k < 500; ++k) {
    sp *= s;
    fact *= k;
    double term = sp / (k * fact);
    sum += term;
    if (term < 1e-18 * (1.0 + std::fabs(sum)) && k > s) break;
  }
  return sum;
}

// Fixed-panel composite Simpson.
inline double simpson_fixed(const std::function<double(double)>& f, double a,
                            double b, int panels) {
  double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// E1 by series (v < 1) or modified Lentz continued fraction, independent of
// the library's std::expint path.
inline double e1_cf(double v) {
  const double euler = 0.57721566490153286061;
  if (v < 1.0) {
    double sum = -euler - std::log(v), term = 1.0;
    for (int n = 1; n < 60; ++n) {
      term *= -v / n;
      sum -= term / n;
      if (std::fabs(term / n) < 1e-18) break;
    }
    return sum;
  }
  double b = v + 1.0, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-v);
}

// inner exponent of mu_kappa: int_0^v (1-e^{-w})/w dw
inline double mu_inner(double v) {
  const double euler = 0.57721566490153286061;
  if (v == 0.0) return 0.0;
  if (v < 0.5) {
    double sum = 0.0, vp = 1.0, fact = 1.0;
    for (int n = 1; n <= 40; ++n) {
      vp *= v;
      fact *= n;
      double t = vp / (n * fact);
      sum += (n % 2 ? t : -t);
    }
    return sum;
  }
  return euler + std::log(v) + e1_cf(v);
}

// mu_kappa by high-panel-count fixed Simpson on [0, 60].
inline double mu_fixed_simpson(double u, double kappa, int panels = 1000000) {
  auto f = [&](double v) { return std::exp(-u * v + kappa * mu_inner(v)); };
  return simpson_fixed(f, 0.0, 60.0, panels);
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// largest prime factor by trial division, P(1) = 1
inline std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      best = d;
      n /= d;
    }
  }
  if (n > 1) best = n;
  return best;
}

inline std::vector<std::uint64_t> friable_filter(std::uint64_t x,
                                                 std::uint64_t y) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= x; ++n)
    if (largest_prime_factor(n) <= y) out.push_back(n);
  return out;
}

}  // namespace oracles

#endif  // FRIABLE_TESTS_ORACLES_HPP
