#include "friable/specfn.hpp"

#include <algorithm>
#include <cmath>

namespace friable {
namespace specfn {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double saddle_xi(double t, const NumericConfig& cfg) {
  cfg.validate();
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("saddle_xi: t must be a nonnegative real");
  if (t == 0.0 || t == 1.0) return 0.0;
  auto g = [t](double x) { return std::expm1(x) - t * x; };
  auto dg = [t](double x) { return std::exp(x) - t; };
  if (t > 1.0) {
    double lo = 1e-12;
    double guess = std::log1p(t);
    if (g(guess) < 0.0) lo = guess;  // guaranteed for t > e - 1
    double hi = 2.0 * (std::log1p(t) + std::log(2.0 + t) + 2.0);
    return newton_bisect(g, dg, lo, hi, cfg.newton_tol, cfg.newton_max_iter);
  }
  // t < 1: the nonzero root is negative.
  double lo = -1.0;
  while (g(lo) < 0.0) {
    lo *= 2.0;
    if (lo < -1e6) throw std::runtime_error("saddle_xi: bracket search failed");
  }
  return newton_bisect(g, dg, lo, -1e-300, cfg.newton_tol, cfg.newton_max_iter);
}

double xi_kappa(double u, Kappa kappa, const NumericConfig& cfg) {
  if (!(u > 0.0)) throw std::invalid_argument("xi_kappa: u must be positive");
  double t = u / kappa.value();
  if (t <= 1.0) return 1.0;
  return std::max(1.0, saddle_xi(t, cfg));
}

double big_i(double s, int order, const NumericConfig& cfg) {
  if (!(s >= 0.0)) throw std::invalid_argument("big_i: s must be nonnegative");
  if (order == 0) {
    if (s == 0.0) return 0.0;
    auto f = [](double v) { return v == 0.0 ? 1.0 : std::expm1(v) / v; };
    double rough = std::max(1.0, std::expm1(s) / std::max(s, 1.0));
    return adaptive_simpson(f, 0.0, s, cfg.quad_rel_tol * rough);
  }
  if (order == 1) return s == 0.0 ? 1.0 : std::expm1(s) / s;
  if (order == 2) {
    if (s < 1e-4) {
      // sum_{j>=0} (j+1) s^j / (j+2)!
      double sum = 0.0, sp = 1.0, fact = 2.0;
      for (int j = 0; j < 12; ++j) {
        sum += (j + 1) * sp / fact;
        sp *= s;
        fact *= (j + 3);
      }
      return sum;
    }
    return (std::exp(s) * s - std::expm1(s)) / (s * s);
  }
  throw std::invalid_argument("big_i: order must be 0, 1 or 2");
}

SaddleParams saddle_params(double u, Kappa kappa, const NumericConfig& cfg) {
  SaddleParams p;
  p.u = u;
  p.xi = xi_kappa(u, kappa, cfg);
  p.sigma0 = kappa.value() * big_i(p.xi, 0, cfg);
  p.sigma2 = kappa.value() * big_i(p.xi, 2, cfg);
  return p;
}

double rho_asymptotic(double u, Kappa kappa, const NumericConfig& cfg) {
  if (!(u >= 2.0))
    throw std::invalid_argument("rho_asymptotic: requires u >= 2");
  SaddleParams p = saddle_params(u, kappa, cfg);
  double k = kappa.value();
  return std::exp(kEulerGamma * k - u * p.xi + p.sigma0) /
         std::sqrt(2.0 * kPi * p.sigma2);
}

double h_envelope(double u, double b_const) {
  if (!(b_const >= 1.0))
    throw std::invalid_argument("h_envelope: requires B >= 1");
  if (!(u > b_const)) return 0.0;
  return u * std::log(u / b_const) - u + b_const;
}

// ---------------------------------------------------------------------------
// RhoTable

double RhoTable::series_value(double u) const {
  // On (1,2]: u^{1-k} rho(u) = (1 - k J(u)) / Gamma(k) with
  // J(u) = sum_{j>=0} z^{k+j}/(k+j), z = 1 - 1/u (geometric, z <= 1/2).
  double z = 1.0 - 1.0 / u;
  double j_sum = 0.0;
  double zp = std::pow(z, kappa_);
  for (int j = 0; j < 400; ++j) {
    double term = zp / (kappa_ + j);
    j_sum += term;
    if (term < 1e-18 * (1.0 + j_sum)) break;
    zp *= z;
  }
  return std::pow(u, kappa_ - 1.0) * (1.0 - kappa_ * j_sum) / gamma_kappa_;
}

double RhoTable::pchip_value(double u) const {
  double pos = u / step_ - static_cast<double>(first_);
  auto n = values_.size();
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= n - 1) i = n - 2;
  double t = (pos - static_cast<double>(i)) * step_;  // local abscissa in [0,h]
  double h = step_;
  double y0 = values_[i], y1 = values_[i + 1];
  double d0 = slopes_[i], d1 = slopes_[i + 1];
  // cubic Hermite on [0,h]
  double s = t / h;
  double s2 = s * s, s3 = s2 * s;
  return y0 * (2 * s3 - 3 * s2 + 1) + y1 * (3 * s2 - 2 * s3) +
         d0 * h * (s3 - 2 * s2 + s) + d1 * h * (s3 - s2);
}

double RhoTable::value(double u) const {
  if (!(u >= 0.0)) throw std::out_of_range("RhoTable::value: u < 0");
  if (u > u_max_ * (1.0 + 1e-12))
    throw std::out_of_range("RhoTable::value: u beyond table range");
  if (u == 0.0) {
    if (kappa_ < 1.0) return INFINITY;
    return kappa_ == 1.0 ? 1.0 : 0.0;
  }
  if (u <= 1.0) return std::pow(u, kappa_ - 1.0) / gamma_kappa_;
  if (u <= 2.0) return series_value(u);
  return pchip_value(std::min(u, u_max_));
}

RhoTable RhoTable::build(Kappa kappa, double u_max, double step,
                         const NumericConfig& cfg) {
  cfg.validate();
  if (!(u_max >= 1.0))
    throw std::invalid_argument("RhoTable: u_max must be >= 1");
  if (!(step > 0.0) || step > 1.0 / 64.0 + 1e-15)
    throw std::invalid_argument("RhoTable: step too coarse (> 1/64)");
  std::size_t per_unit = static_cast<std::size_t>(std::llround(1.0 / step));
  if (std::fabs(per_unit * step - 1.0) > 1e-9)
    throw std::invalid_argument("RhoTable: step must divide the unit interval");

  RhoTable tab;
  tab.kappa_ = kappa.value();
  tab.step_ = step;
  tab.per_unit_ = per_unit;
  tab.gamma_kappa_ = std::tgamma(kappa.value());
  std::size_t n_total = static_cast<std::size_t>(std::llround(u_max / step));
  if (n_total < per_unit) n_total = per_unit;
  // keep the mesh beyond u=2 an even number of intervals for pair-Simpson
  if (n_total > 2 * per_unit && (n_total - 2 * per_unit) % 2 != 0) ++n_total;
  tab.u_max_ = n_total * step;

  double k = tab.kappa_;
  tab.first_ = (k < 1.0) ? 1 : 0;
  tab.values_.assign(n_total + 1 - tab.first_, 0.0);

  auto set = [&](std::size_t j, double v) { tab.values_[j - tab.first_] = v; };
  auto get = [&](std::size_t j) { return tab.values_[j - tab.first_]; };

  // (0,1]: closed form; the u=0 slot (kappa >= 1) carries the limit value.
  if (tab.first_ == 0) set(0, k == 1.0 ? 1.0 : 0.0);
  for (std::size_t j = 1; j <= std::min(per_unit, n_total); ++j)
    set(j, std::pow(j * step, k - 1.0) / tab.gamma_kappa_);
  // (1,2]: exact series.
  for (std::size_t j = per_unit + 1; j <= std::min(2 * per_unit, n_total); ++j)
    set(j, tab.series_value(j * step));

  // (2, u_max]: advance with the positive-kernel integral of the system,
  //   u rho(u) = kappa int_{u-1}^{u} rho(t) dt,
  // obtained by integrating the equation against the constant weight.
  // All terms are nonnegative, so the evaluation keeps relative accuracy
  // over the full dynamic range of rho (the u^{1-k}-weighted subtractive
  // form loses it exponentially). Composite Simpson over the unit window;
  // the unknown endpoint enters linearly with weight h/3 and is solved for.
  if (n_total > 2 * per_unit && per_unit % 2 == 0) {
    for (std::size_t j = 2 * per_unit; j < n_total; ++j) {
      double u = (j + 1) * step;
      std::size_t lo = j + 1 - per_unit;
      KahanSum s;
      for (std::size_t i = lo; i < j + 1; i += 2) {
        double tail = (i + 2 == j + 1) ? 0.0 : get(i + 2);
        s.add(step / 3.0 * (get(i) + 4.0 * get(i + 1) + tail));
      }
      double c = k / u;
      set(j + 1, c * s.value() / (1.0 - c * step / 3.0));
    }
  } else if (n_total > 2 * per_unit) {
    throw std::invalid_argument("RhoTable: steps per unit must be even");
  }

  // PCHIP slopes (Fritsch-Carlson, uniform mesh).
  std::size_t m = tab.values_.size();
  tab.slopes_.assign(m, 0.0);
  if (m >= 3) {
    std::vector<double> d(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
      d[i] = (tab.values_[i + 1] - tab.values_[i]) / step;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (d[i - 1] * d[i] > 0.0)
        tab.slopes_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
    }
    // one-sided endpoint rule with monotonicity clamp
    auto endpoint = [](double d0, double d1) {
      double s = 1.5 * d0 - 0.5 * d1;
      if (s * d0 <= 0.0) return 0.0;
      if (std::fabs(s) > 3.0 * std::fabs(d0)) return 3.0 * d0;
      return s;
    };
    tab.slopes_[0] = endpoint(d[0], d[1]);
    tab.slopes_[m - 1] = endpoint(d[m - 2], d[m - 3]);
  }

  // int_1^2 rho (exact integrand, adaptive).
  {
    auto f = [&](double v) { return v <= 1.0 ? 1.0 / tab.gamma_kappa_
                                             : tab.series_value(v); };
    double hi = std::min(2.0, tab.u_max_);
    tab.int_12_ = adaptive_simpson(f, 1.0, hi, 1e-13);
  }

  // pairwise composite Simpson suffix sums on [2, u_max]
  if (n_total > 2 * per_unit) {
    std::size_t pairs = (n_total - 2 * per_unit) / 2;
    tab.suffix_.assign(pairs + 1, 0.0);
    for (std::size_t p = pairs; p-- > 0;) {
      std::size_t j = 2 * per_unit + 2 * p;
      double s =
          step / 3.0 * (get(j) + 4.0 * get(j + 1) + get(j + 2));
      tab.suffix_[p] = tab.suffix_[p + 1] + s;
    }
  } else {
    tab.suffix_.assign(1, 0.0);
  }

  tab.norm_ = tab.integral_from(0.0);
  return tab;
}

double RhoTable::integral_from(double u) const {
  if (u >= u_max_) return 0.0;
  if (u < 0.0) u = 0.0;
  KahanSum acc;
  if (u < 1.0) {
    acc.add((1.0 - std::pow(u, kappa_)) / (kappa_ * gamma_kappa_));
    acc.add(int_12_);
    u = 2.0;
  } else if (u < 2.0) {
    double hi = std::min(2.0, u_max_);
    auto f = [&](double v) { return series_value(v); };
    acc.add(adaptive_simpson(f, u, hi, 1e-13));
    u = 2.0;
  }
  if (u_max_ <= 2.0 || u >= u_max_) return acc.value();

  // partial head [u, next pair-aligned mesh point), then suffix sums
  double pos = (u - 2.0) / step_;
  std::size_t idx = static_cast<std::size_t>(std::ceil(pos - 1e-12));
  if (idx % 2 != 0) ++idx;
  std::size_t pairs = suffix_.size() - 1;
  if (idx > 2 * pairs) idx = 2 * pairs;
  double u_aligned = 2.0 + idx * step_;
  if (u_aligned > u + 1e-15) {
    auto f = [&](double v) { return pchip_value(v); };
    double scale = pchip_value(u) * (u_aligned - u) + 1e-300;
    acc.add(adaptive_simpson(f, u, u_aligned, 1e-11 * scale));
  }
  acc.add(suffix_[idx / 2]);
  return acc.value();
}

double RhoTable::tail_bound() const {
  NumericConfig cfg;
  double rho_end = value(u_max_);
  double xi_end = xi_kappa(u_max_, Kappa(kappa_), cfg);
  return 10.0 * rho_end / xi_end;
}

// ---------------------------------------------------------------------------

double lambda_kappa(double u, const RhoTable& rho, const NumericConfig& cfg) {
  cfg.validate();
  if (!(u >= 0.0)) throw std::invalid_argument("lambda_kappa: u must be >= 0");
  if (u > rho.u_max() - 1.0)
    throw std::out_of_range("lambda_kappa: u beyond table range (u_max - 1)");
  double pref = std::exp(-kEulerGamma * rho.kappa());
  double result = pref * rho.integral_from(u);
  double tail = pref * rho.tail_bound();
  if (!(tail < cfg.tail_cutoff_eps * result) && result > 0.0)
    throw std::out_of_range("lambda_kappa: certified tail exceeds tolerance");
  return result;
}

double j_kappa(double u, const RhoTable& rho, const NumericConfig& cfg) {
  return 1.0 - lambda_kappa(u, rho, cfg);
}

namespace {

// int_0^v (1 - e^{-w})/w dw; series for small v, gamma + log v + E1(v) beyond.
double soft_log(double v) {
  if (v <= 0.5) {
    double sum = 0.0, term = 0.0, vp = 1.0, fact = 1.0;
    for (int n = 1; n <= 30; ++n) {
      vp *= v;
      fact *= n;
      term = vp / (n * fact);
      sum += (n % 2 == 1) ? term : -term;
      if (term < 1e-18) break;
    }
    return sum;
  }
  return kEulerGamma + std::log(v) - std::expint(-v);
}

}  // namespace

double mu_kappa(double u, Kappa kappa, const NumericConfig& cfg) {
  cfg.validate();
  if (!(u > 0.0)) throw std::invalid_argument("mu_kappa: u must be positive");
  double k = kappa.value();
  auto f = [&](double v) { return std::exp(-u * v + k * soft_log(v)); };
  // integrand <= e^{gamma k} v^k e^{-uv} for v >= 1; truncate by doubling
  double scale = 0.5 / u;  // lower bound on mu from v in [0, 1/u]
  double upper = std::max(8.0, 2.0 * (k + 2.0) / u);
  for (int it = 0; it < 60; ++it) {
    double tail = (u * upper > k + 1.0)
                      ? std::exp(kEulerGamma * k + k * std::log(upper) -
                                 u * upper) /
                            (u - k / upper)
                      : INFINITY;
    if (tail < cfg.tail_cutoff_eps * scale) break;
    upper *= 2.0;
  }
  return adaptive_simpson(f, 0.0, upper, cfg.quad_rel_tol * scale * 0.1, 52);
}

}  // namespace specfn
}  // namespace friable
