#ifndef FRIABLE_NUMERIC_HPP
#define FRIABLE_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace friable {

// Euler-Mascheroni constant, 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Compensated (Kahan) accumulator for long sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct NumericConfig {
  double quad_rel_tol = 1e-10;
  double newton_tol = 1e-13;
  int newton_max_iter = 64;
  double tail_cutoff_eps = 1e-14;

  void validate() const {
    if (!(quad_rel_tol > 0) || !(newton_tol > 0) || !(tail_cutoff_eps > 0) ||
        newton_max_iter <= 0)
      throw std::invalid_argument("NumericConfig: tolerances must be positive");
  }
};

// Adaptive Simpson quadrature. The tolerance is absolute; callers scale it
// from the expected magnitude of the result. Bisection grades automatically
// toward endpoint singularities up to max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 48);

// Safeguarded Newton iteration on [lo, hi]; bracket must contain a sign
// change of f. Converges to |f| root within tol on the argument.
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi, double tol, int max_iter);

}  // namespace friable

#endif  // FRIABLE_NUMERIC_HPP
