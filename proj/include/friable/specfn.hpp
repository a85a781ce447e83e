#ifndef FRIABLE_SPECFN_HPP
#define FRIABLE_SPECFN_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "friable/numeric.hpp"

namespace friable {

// Convolution-power parameter of the Dickman-type system; strictly positive.
class Kappa {
 public:
  explicit Kappa(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument("Kappa: value must be a positive real");
  }
  double value() const { return value_; }

 private:
  double value_;
};

namespace specfn {

// Nonzero real root of e^x = 1 + t*x (t > 0, t != 1); xi(0) = xi(1) = 0.
double saddle_xi(double t, const NumericConfig& cfg = {});

// max(1, xi(u/kappa)).
double xi_kappa(double u, Kappa kappa, const NumericConfig& cfg = {});

// I(s) = int_0^s (e^v - 1)/v dv and its first two derivatives.
// order 0 by adaptive quadrature, order 1 closed form, order 2 with a
// series switch below s = 1e-4 for the removable singularity.
double big_i(double s, int order, const NumericConfig& cfg = {});

struct SaddleParams {
  double u = 0.0;
  double xi = 1.0;      // xi_kappa(u)
  double sigma0 = 0.0;  // kappa * I(xi)
  double sigma2 = 0.0;  // kappa * I''(xi)
};

SaddleParams saddle_params(double u, Kappa kappa, const NumericConfig& cfg = {});

// Main factor of the saddle-point formula for rho_kappa, valid for u >= 2:
// exp(gamma*kappa - u*xi + sigma0) / sqrt(2*pi*sigma2).
double rho_asymptotic(double u, Kappa kappa, const NumericConfig& cfg = {});

// h_B(u) = u log(u/B) - u + B for u > B, else 0. Requires B >= 1.
double h_envelope(double u, double b_const);

// Tabulation of rho_kappa on a uniform mesh. Exact closed forms are used on
// (0,2]; beyond 2 the table is advanced with the integrated form
//   u^{1-k} rho(u) = v^{1-k} rho(v) - k int_v^u t^{-k} rho(t-1) dt.
// Queries between mesh points use monotone cubic (PCHIP) interpolation.
// Immutable once built; safe to share across threads.
class RhoTable {
 public:
  static constexpr double kDefaultStep = 1.0 / 256.0;
  static constexpr double kDefaultUMax = 64.0;

  static RhoTable build(Kappa kappa, double u_max = kDefaultUMax,
                        double step = kDefaultStep,
                        const NumericConfig& cfg = {});

  double kappa() const { return kappa_; }
  double step() const { return step_; }
  double u_max() const { return u_max_; }

  // rho_kappa(u); throws std::out_of_range for u < 0 or u > u_max.
  double value(double u) const;

  // int_u^{u_max} rho_kappa(v) dv.
  double integral_from(double u) const;

  // Certified bound on int_{u_max}^infty rho_kappa (shape of the
  // lambda ~ rho/xi relation, times safety 10).
  double tail_bound() const;

  // Cached estimate of int_0^infty rho_kappa (should be e^{gamma*kappa}).
  double gamma_kappa_norm() const { return norm_; }

  // Mesh access for diagnostics and property tests. Index i corresponds to
  // u = (i + first_index) * step; for kappa < 1 the table starts at u = step.
  std::size_t first_index() const { return first_; }
  std::size_t mesh_points() const { return values_.size(); }
  double mesh_u(std::size_t i) const { return (i + first_) * step_; }
  double mesh_value(std::size_t i) const { return values_[i]; }

 private:
  RhoTable() = default;

  double series_value(double u) const;  // exact form on (1,2]
  double pchip_value(double u) const;

  double kappa_ = 1.0;
  double step_ = kDefaultStep;
  double u_max_ = kDefaultUMax;
  std::size_t first_ = 0;          // 1 when kappa < 1
  std::size_t per_unit_ = 256;     // mesh points per unit interval
  std::vector<double> values_;     // rho at mesh points
  std::vector<double> slopes_;     // PCHIP derivatives
  std::vector<double> suffix_;     // pairwise Simpson suffix sums from u=2
  double int_12_ = 0.0;            // int_1^2 rho (cached)
  double norm_ = 0.0;
  double gamma_kappa_ = 1.0;       // Gamma(kappa)
};

// lambda_kappa(u) = e^{-gamma*kappa} int_u^infty rho_kappa; requires
// u <= u_max - 1 and a negligible certified tail, else throws.
double lambda_kappa(double u, const RhoTable& rho, const NumericConfig& cfg = {});

// j_kappa(u) = 1 - lambda_kappa(u).
double j_kappa(double u, const RhoTable& rho, const NumericConfig& cfg = {});

// Decreasing solution of the adjoint equation:
// mu_kappa(u) = int_0^infty exp(-u*v + kappa*int_0^v (1-e^{-w})/w dw) dv.
double mu_kappa(double u, Kappa kappa, const NumericConfig& cfg = {});

}  // namespace specfn
}  // namespace friable

#endif  // FRIABLE_SPECFN_HPP
