#include "friable/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace friable {
namespace arith {

namespace {

constexpr std::uint64_t kSieveMemoryCap = 1ULL << 31;

std::uint64_t floor_u64(double x) {
  if (!(x >= 0.0) || x >= 9.2e18)
    throw std::invalid_argument("argument out of integer range");
  return static_cast<std::uint64_t>(x);
}

}  // namespace

PrimeTable primes_up_to(std::uint64_t limit) {
  if (limit < 1) throw std::invalid_argument("primes_up_to: limit >= 1");
  if (limit > kSieveMemoryCap)
    throw std::length_error("primes_up_to: limit beyond memory budget");
  PrimeTable table;
  table.limit = limit;
  if (limit < 2) return table;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) table.primes.push_back(i);
  return table;
}

// ---------------------------------------------------------------------------
// MultiplicativeSpec

MultiplicativeSpec MultiplicativeSpec::tau_kappa(double kappa) {
  if (!(kappa > 0)) throw std::invalid_argument("tau_kappa: kappa > 0");
  MultiplicativeSpec s;
  s.kind_ = Kind::kTauKappa;
  s.kappa_ = kappa;
  return s;
}

MultiplicativeSpec MultiplicativeSpec::squarefree_uniform(double c) {
  if (!(c >= 0)) throw std::invalid_argument("squarefree_uniform: c >= 0");
  MultiplicativeSpec s;
  s.kind_ = Kind::kSquarefreeUniform;
  s.c_ = c;
  return s;
}

MultiplicativeSpec MultiplicativeSpec::poly_density(sieve::Polynomial g) {
  MultiplicativeSpec s;
  s.kind_ = Kind::kPolyDensity;
  s.poly_ = std::move(g);
  return s;
}

MultiplicativeSpec MultiplicativeSpec::table(
    std::map<std::pair<std::uint64_t, unsigned>, double> entries) {
  for (const auto& [pp, v] : entries)
    if (!(v >= 0.0))
      throw std::invalid_argument("table spec: values must be nonnegative");
  MultiplicativeSpec s;
  s.kind_ = Kind::kTable;
  s.entries_ = std::move(entries);
  return s;
}

MultiplicativeSpec& MultiplicativeSpec::set_eta(double eta) {
  if (!(eta > 0.0 && eta < 0.5))
    throw std::invalid_argument("eta must lie in (0, 1/2)");
  eta_ = eta;
  return *this;
}

MultiplicativeSpec& MultiplicativeSpec::set_series_cutoff(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("series_cutoff must be >= 1");
  series_cutoff_ = cutoff;
  return *this;
}

double MultiplicativeSpec::value(std::uint64_t p, unsigned nu) const {
  if (nu == 0) return 1.0;
  if (!excluded_.empty() &&
      std::binary_search(excluded_.begin(), excluded_.end(), p))
    return 0.0;
  switch (kind_) {
    case Kind::kTauKappa: {
      // binom(kappa + nu - 1, nu)
      double b = 1.0;
      for (unsigned i = 1; i <= nu; ++i) b *= (kappa_ + i - 1.0) / i;
      return b;
    }
    case Kind::kSquarefreeUniform:
      return nu == 1 ? c_ : 0.0;
    case Kind::kPolyDensity:
      return static_cast<double>(sieve::rho_poly(p, nu, poly_));
    case Kind::kTable: {
      auto it = entries_.find({p, nu});
      return it == entries_.end() ? 0.0 : it->second;
    }
  }
  return 0.0;
}

unsigned MultiplicativeSpec::table_max_nu(std::uint64_t p) const {
  if (kind_ != Kind::kTable) return 0;
  unsigned best = 0;
  for (const auto& [pp, v] : entries_)
    if (pp.first == p && v != 0.0) best = std::max(best, pp.second);
  return best;
}

bool MultiplicativeSpec::squarefree_supported() const {
  switch (kind_) {
    case Kind::kSquarefreeUniform:
      return true;
    case Kind::kTauKappa:
    case Kind::kPolyDensity:
      return false;
    case Kind::kTable:
      for (const auto& [pp, v] : entries_)
        if (pp.second >= 2 && v != 0.0) return false;
      return true;
  }
  return false;
}

MultiplicativeSpec MultiplicativeSpec::restricted(std::uint64_t m) const {
  if (m < 1) throw std::invalid_argument("restricted: m >= 1");
  MultiplicativeSpec out = *this;
  std::uint64_t rest = m;
  for (std::uint64_t d = 2; d * d <= rest; ++d) {
    if (rest % d == 0) {
      out.excluded_.push_back(d);
      while (rest % d == 0) rest /= d;
    }
  }
  if (rest > 1) out.excluded_.push_back(rest);
  std::sort(out.excluded_.begin(), out.excluded_.end());
  out.excluded_.erase(std::unique(out.excluded_.begin(), out.excluded_.end()),
                      out.excluded_.end());
  return out;
}

double f_value(const MultiplicativeSpec& spec, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("f_value: n >= 1");
  double out = 1.0;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      unsigned nu = 0;
      while (n % d == 0) {
        n /= d;
        ++nu;
      }
      out *= spec.value(d, nu);
    }
  }
  if (n > 1) out *= spec.value(n, 1);
  return out;
}

// ---------------------------------------------------------------------------
// friable traversal

namespace {

struct Walker {
  const std::vector<std::uint64_t>& primes;
  std::uint64_t x;
  const MultiplicativeSpec* spec;  // null: f == 1
  bool inverse_weight = false;
  std::uint64_t node_budget = 0;
  std::uint64_t nodes = 0;
  KahanSum sum;
  std::vector<std::uint64_t>* collect = nullptr;
  std::uint64_t element_budget = 0;

  void walk(std::size_t i, std::uint64_t n, double fw) {
    if (++nodes > node_budget)
      throw std::length_error("friable traversal exceeds node budget");
    if (collect) {
      if (collect->size() >= element_budget)
        throw std::length_error("friable enumeration exceeds element budget");
      collect->push_back(n);
    } else {
      sum.add(inverse_weight ? fw / static_cast<double>(n) : fw);
    }
    for (std::size_t j = i; j < primes.size(); ++j) {
      std::uint64_t p = primes[j];
      if (n > x / p) break;
      std::uint64_t m = n * p;
      unsigned nu = 1;
      while (true) {
        double f = spec ? spec->value(p, nu) : 1.0;
        if (f != 0.0 || collect) walk(j + 1, m, fw * f);
        if (m > x / p) break;
        m *= p;
        ++nu;
      }
    }
  }
};

std::vector<std::uint64_t> primes_leq(double bound) {
  if (bound < 2.0) return {};
  return primes_up_to(floor_u64(bound)).primes;
}

}  // namespace

std::vector<std::uint64_t> enumerate_friable(double x, double y,
                                             const EnumBudget& budget) {
  if (!(x >= 1.0) || !(y >= 1.0))
    throw std::invalid_argument("enumerate_friable: x, y >= 1");
  auto primes = primes_leq(std::min(x, y));
  std::vector<std::uint64_t> out;
  Walker w{primes, floor_u64(x), nullptr, false, budget.max_nodes};
  w.collect = &out;
  w.element_budget = budget.max_elements;
  w.walk(0, 1, 1.0);
  std::sort(out.begin(), out.end());
  return out;
}

double psi_f(double x, double y, const MultiplicativeSpec& spec,
             const EnumBudget& budget) {
  if (!(x >= 1.0) || !(y >= 1.0))
    throw std::invalid_argument("psi_f: x, y >= 1");
  auto primes = primes_leq(std::min(x, y));
  Walker w{primes, floor_u64(x), &spec, true, budget.max_nodes};
  w.walk(0, 1, 1.0);
  return w.sum.value();
}

double big_psi_f(double x, double y, const MultiplicativeSpec& spec,
                 const EnumBudget& budget) {
  if (!(x >= 1.0) || !(y >= 1.0))
    throw std::invalid_argument("big_psi_f: x, y >= 1");
  auto primes = primes_leq(std::min(x, y));
  Walker w{primes, floor_u64(x), &spec, false, budget.max_nodes};
  w.walk(0, 1, 1.0);
  return w.sum.value();
}

// ---------------------------------------------------------------------------
// Euler products

namespace {

// sum_{nu>=0} f(p^nu)/p^nu with a certified geometric tail; throws when the
// local series fails to converge. Table kinds are summed exactly over their
// finite support.
long double local_factor(const MultiplicativeSpec& spec, std::uint64_t p) {
  long double sum = 1.0L;
  if (unsigned top = spec.table_max_nu(p)) {
    double pw = 1.0;
    for (unsigned nu = 1; nu <= top; ++nu) {
      pw *= static_cast<double>(p);
      sum += spec.value(p, nu) / pw;
    }
    return sum;
  }
  double pw = 1.0;
  double prev = 0.0;
  int quiet = 0, rising = 0;
  int hard_cap = std::max(spec.series_cutoff(), 600);
  for (int nu = 1; nu <= hard_cap; ++nu) {
    pw *= static_cast<double>(p);
    double t = spec.value(p, static_cast<unsigned>(nu)) / pw;
    sum += t;
    if (prev > 0.0 && t >= prev * (1.0 - 1e-12) && t > 1e-15 * sum) {
      if (++rising >= 8) throw std::domain_error("f1y: divergent local factor");
    } else {
      rising = 0;
    }
    prev = t;
    if (nu >= spec.series_cutoff() || t == 0.0) {
      if (t < 1e-18 * static_cast<double>(sum)) {
        if (++quiet >= 2) return sum;
      } else {
        quiet = 0;
      }
    }
  }
  throw std::domain_error("f1y: local factor tail not certified at cutoff");
}

}  // namespace

double f1y(double y, const MultiplicativeSpec& spec) {
  if (!(y >= 1.0)) throw std::invalid_argument("f1y: y >= 1");
  long double prod = 1.0L;
  for (std::uint64_t p : primes_leq(y)) prod *= local_factor(spec, p);
  return static_cast<double>(prod);
}

double psi_f_star(double x, double y, const MultiplicativeSpec& spec,
                  const EnumBudget& budget) {
  double total = f1y(y, spec);
  double head = psi_f(x, y, spec, budget);
  double star = total - head;
  if (star < 0.0) {
    if (star < -1e-12 * total)
      throw std::runtime_error("psi_f_star: negative beyond floating residue");
    star = 0.0;
  }
  return star;
}

double r_f(double z, Kappa kappa, const MultiplicativeSpec& spec) {
  if (!(z >= 0.0)) throw std::invalid_argument("r_f: z >= 0");
  if (z <= 1.0) return 0.0;
  KahanSum s;
  for (std::uint64_t p : primes_leq(z)) {
    double pd = static_cast<double>(p);
    s.add(spec.value(p, 1) * std::log(pd) / pd);
  }
  return s.value() - kappa.value() * std::log(z);
}

std::pair<double, double> z_moments(double y, const MultiplicativeSpec& spec) {
  if (!(y >= 2.0)) throw std::invalid_argument("z_moments: y >= 2");
  KahanSum s1, s2;
  for (std::uint64_t p : primes_leq(y)) {
    double pd = static_cast<double>(p);
    double fp = spec.value(p, 1);
    double base = fp * fp / (pd * pd);
    double lp = std::log(pd);
    s1.add(base * lp);
    s2.add(base * lp * lp);
  }
  return {1.0 + s1.value(), 1.0 + s2.value()};
}

double alpha_kappa(double x, double y, Kappa kappa) {
  if (!(x >= y) || !(y >= 2.0))
    throw std::invalid_argument("alpha_kappa: x >= y >= 2");
  double u = std::log(x) / std::log(y);
  double xi = (u <= 0.0) ? 1.0 : specfn::xi_kappa(u, kappa);
  return 1.0 - xi / std::log(y);
}

double rankin_bound(double x, double y, Kappa kappa,
                    const MultiplicativeSpec& spec) {
  if (!(x >= 1.0) || !(y >= 2.0))
    throw std::invalid_argument("rankin_bound: x >= 1, y >= 2");
  double logy = std::log(y);
  double u = std::log(x) / logy;
  double xi = (u <= 0.0) ? 1.0 : specfn::xi_kappa(u, kappa);
  // The bound holds for every sigma in (0,1]; alpha_kappa is the good
  // choice when it lands there. K_sigma convergence is certified per local
  // factor below, which is what the class-level domain condition guards.
  double sigma = std::min(1.0, std::max(1.0 - xi / logy, 0.05));
  KahanSum k_sigma, s1;
  for (std::uint64_t p : primes_leq(y)) {
    double pd = static_cast<double>(p);
    s1.add(spec.value(p, 1) / std::pow(pd, sigma));
    unsigned min_nu = std::max(6u, spec.table_max_nu(p));
    bool certified = false;
    for (unsigned nu = 2; nu <= 8000; ++nu) {
      double t = spec.value(p, nu) / std::pow(pd, sigma * nu);
      k_sigma.add(t);
      if (nu > min_nu && t < 1e-18 * (1.0 + k_sigma.value())) {
        certified = true;
        break;
      }
    }
    // terms may rise for a while (tau_kappa at small sigma) but must decay
    // geometrically before the cap for the tail to be certified
    if (!certified)
      throw std::domain_error(
          "rankin_bound: K_sigma tail not certified (divergent or too slow)");
  }
  return std::pow(x, sigma - 1.0) * std::exp(k_sigma.value() + s1.value());
}

// ---------------------------------------------------------------------------
// star-form functional equation, exact on squarefree supports

namespace {

struct SquarefreeSet {
  std::vector<double> n;       // ascending
  std::vector<double> f;       // f(n)
  std::vector<std::uint32_t> mask;
  std::vector<std::uint64_t> primes;
  std::vector<double> fp;      // f(p)
};

SquarefreeSet build_squarefree_set(double y, const MultiplicativeSpec& spec,
                                   const EnumBudget& budget) {
  SquarefreeSet s;
  s.primes = primes_leq(y);
  std::size_t np = s.primes.size();
  if (np > 24 || (1ULL << np) > budget.max_elements)
    throw std::length_error("verify_star_equation: squarefree support too large");
  s.fp.resize(np);
  for (std::size_t i = 0; i < np; ++i) s.fp[i] = spec.value(s.primes[i], 1);
  std::size_t total = 1ULL << np;
  s.n.resize(total);
  s.f.resize(total);
  s.mask.resize(total);
  s.n[0] = 1.0;
  s.f[0] = 1.0;
  s.mask[0] = 0;
  std::size_t count = 1;
  for (std::size_t i = 0; i < np; ++i) {
    double pd = static_cast<double>(s.primes[i]);
    for (std::size_t k = 0; k < count; ++k) {
      s.n[count + k] = s.n[k] * pd;
      s.f[count + k] = s.f[k] * s.fp[i];
      s.mask[count + k] = s.mask[k] | (1u << i);
    }
    count *= 2;
  }
  // sort jointly by n
  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return s.n[a] < s.n[b]; });
  SquarefreeSet out;
  out.primes = s.primes;
  out.fp = s.fp;
  out.n.reserve(total);
  out.f.reserve(total);
  out.mask.reserve(total);
  for (std::size_t i : idx) {
    out.n.push_back(s.n[i]);
    out.f.push_back(s.f[i]);
    out.mask.push_back(s.mask[i]);
  }
  return out;
}

}  // namespace

IdentityCheck verify_star_equation(double x, double y, Kappa kappa,
                            const MultiplicativeSpec& spec,
                            const EnumBudget& budget) {
  if (!spec.squarefree_supported())
    throw std::domain_error(
        "verify_star_equation: exact mode requires a squarefree-supported spec");
  if (!(x >= 2.0) || !(y >= 2.0))
    throw std::invalid_argument("verify_star_equation: x >= 2, y >= 2");
  double kv = kappa.value();
  SquarefreeSet s = build_squarefree_set(y, spec, budget);
  std::size_t np = s.primes.size();

  // prefix sums of f(p) log p / p for exact r_f evaluation
  std::vector<double> pref(np + 1, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    double pd = static_cast<double>(s.primes[i]);
    pref[i + 1] = pref[i] + s.fp[i] * std::log(pd) / pd;
  }
  auto r_val = [&](double z) -> double {
    if (z <= 1.0) return 0.0;
    std::size_t k =
        std::upper_bound(s.primes.begin(), s.primes.end(),
                         static_cast<std::uint64_t>(z)) -
        s.primes.begin();
    return pref[k] - kv * std::log(z);
  };

  double logx = std::log(x);
  double xy = x / y;
  double rfy = r_val(y);

  KahanSum star_x, t1, main_sum, e1;
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    double n = s.n[i], fn = s.f[i];
    if (fn == 0.0) continue;
    double w = fn / n;
    if (n > x) {
      star_x.add(w);
      t1.add(w * (std::log(n) - logx));
    }
    if (n > xy) {
      double hi = std::min(x, n);
      if (hi > xy) main_sum.add(w * (std::log(hi) - std::log(xy)));
      // sign as forced by the expansion of S in the proof; the displayed
      // definition carries a stray minus that breaks the identity
      e1.add(w * (rfy - r_val(x / n)));
    }
  }
  double lhs = star_x.value() * logx + t1.value();

  // E2: only nu = 1 survives on squarefree supports
  KahanSum e2;
  for (std::size_t i = 0; i < np; ++i) {
    if (s.fp[i] == 0.0) continue;
    double pd = static_cast<double>(s.primes[i]);
    double t = x / (pd * pd);
    long double full = 1.0L;
    for (std::size_t j = 0; j < np; ++j)
      if (j != i) full *= (1.0L + s.fp[j] / static_cast<double>(s.primes[j]));
    KahanSum head;
    for (std::size_t k = 0; k < s.n.size() && s.n[k] <= t; ++k)
      if (!(s.mask[k] & (1u << i)) && s.f[k] != 0.0)
        head.add(s.f[k] / s.n[k]);
    double star_p = static_cast<double>(full) - head.value();
    e2.add(-s.fp[i] * s.fp[i] * std::log(pd) / (pd * pd) * star_p);
  }

  IdentityCheck out;
  out.lhs = lhs;
  out.rhs = kv * main_sum.value() + e1.value() + e2.value();
  out.residual = out.lhs - out.rhs;
  return out;
}

// ---------------------------------------------------------------------------
// initial functional equation, y = x

IdentityCheck verify_initial_equation(double x, Kappa kappa,
                            const MultiplicativeSpec& spec,
                            const EnumBudget& budget) {
  if (!(x >= 1.0)) throw std::invalid_argument("verify_initial_equation: x >= 1");
  std::uint64_t n_max = floor_u64(x);
  if (n_max > budget.max_elements)
    throw std::length_error("verify_initial_equation: x beyond element budget");
  double kv = kappa.value();
  IdentityCheck out;
  if (n_max < 1) return out;

  // smallest prime factor sieve and multiplicative fill of f(n)
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::uint64_t i = 2; i <= n_max; ++i) {
    if (spf[i] == 0)
      for (std::uint64_t j = i; j <= n_max; j += i)
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }
  std::vector<double> fv(n_max + 1, 0.0);
  fv[1] = 1.0;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    std::uint64_t p = spf[n], m = n;
    unsigned nu = 0;
    while (m % p == 0) {
      m /= p;
      ++nu;
    }
    fv[n] = fv[m] * spec.value(p, nu);
  }

  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= n_max; ++i)
    if (spf[i] == i) primes.push_back(i);
  std::vector<double> pref(primes.size() + 1, 0.0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    double pd = static_cast<double>(primes[i]);
    pref[i + 1] = pref[i] + spec.value(primes[i], 1) * std::log(pd) / pd;
  }
  auto r_val = [&](double z) -> double {
    if (z <= 1.0) return 0.0;
    std::size_t k = std::upper_bound(primes.begin(), primes.end(),
                                     static_cast<std::uint64_t>(z)) -
                    primes.begin();
    return pref[k] - kv * std::log(z);
  };

  double logx = std::log(x);
  KahanSum psi_x, integral, d1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (fv[n] == 0.0) continue;
    double w = fv[n] / static_cast<double>(n);
    psi_x.add(w);
    integral.add(w * (logx - std::log(static_cast<double>(n))));
    d1.add(w * r_val(x / static_cast<double>(n)));
  }

  // psi_{f_p}(t) with t <= x/p^2: direct coprime sums are cheap
  auto psi_fp = [&](double t, std::uint64_t p) -> double {
    if (t < 1.0) return 0.0;
    std::uint64_t tm = static_cast<std::uint64_t>(t);
    KahanSum s;
    for (std::uint64_t n = 1; n <= tm; ++n)
      if (n % p != 0 && fv[n] != 0.0) s.add(fv[n] / static_cast<double>(n));
    return s.value();
  };

  KahanSum d2, d3;
  for (std::uint64_t p : primes) {
    double pd = static_cast<double>(p);
    double fp1 = spec.value(p, 1);
    // D2: nu >= 1, p^{nu+1} <= x
    double ppow = pd * pd;  // p^{nu+1}
    for (unsigned nu = 1; ppow <= x; ++nu, ppow *= pd) {
      double fnu = spec.value(p, nu);
      if (fp1 != 0.0 && fnu != 0.0)
        d2.add(-fp1 * fnu * std::log(pd) / ppow * psi_fp(x / ppow, p));
    }
    // D3: nu >= 2, p^nu <= x
    ppow = pd * pd;
    for (unsigned nu = 2; ppow <= x; ++nu, ppow *= pd) {
      double fnu = spec.value(p, nu);
      if (fnu != 0.0)
        d3.add(fnu * std::log(ppow) / ppow * psi_fp(x / ppow, p));
    }
  }

  out.lhs = psi_x.value() * logx;
  out.rhs = (kv + 1.0) * integral.value() + d1.value() + d2.value() + d3.value();
  out.residual = out.lhs - out.rhs;
  return out;
}

// ---------------------------------------------------------------------------

Envelopes envelopes(double x, double y, Kappa kappa,
                    const MultiplicativeSpec& spec, double b_const) {
  if (!(x >= y) || !(y >= 3.0))
    throw std::invalid_argument("envelopes: x >= y >= 3");
  double logy = std::log(y);
  double u = std::log(x) / logy;
  double xi = specfn::xi_kappa(u, kappa);
  auto [zz1, zz2] = z_moments(y, spec);
  double lu1 = std::log(u + 1.0);
  Envelopes env;
  env.thm31 = u * xi / logy;
  env.thm32 = std::min(
      1.0, zz1 / logy +
               u * lu1 / logy * (1.0 + u * std::log1p(zz2 * lu1 / logy)));
  double hb = specfn::h_envelope(u, b_const);
  env.thm_a = std::exp(-hb) / logy;
  env.thm_b = u * std::exp(-hb) / logy;
  return env;
}

HypothesisReport hypothesis_report(const MultiplicativeSpec& spec, Kappa kappa,
                                   double z_max) {
  if (!(z_max >= 2.0)) throw std::invalid_argument("hypothesis_report: z_max >= 2");
  double kv = kappa.value();
  HypothesisReport rep;
  auto primes = primes_leq(z_max);
  double running = 0.0;   // sum of f(p) log p / p over p <= current
  double min_r = 0.0;     // r_f(1) = 0
  double sup_abs = 0.0, sup_diff = 0.0;
  auto feed = [&](double r) {
    sup_abs = std::max(sup_abs, std::fabs(r));
    sup_diff = std::max(sup_diff, r - min_r);
    min_r = std::min(min_r, r);
  };
  for (std::uint64_t p : primes) {
    double pd = static_cast<double>(p);
    double lz = std::log(pd);
    feed(running - kv * lz);  // r at p-epsilon
    running += spec.value(p, 1) * lz / pd;
    feed(running - kv * lz);  // r at p
  }
  feed(running - kv * std::log(z_max));
  rep.a_bilateral = sup_abs;
  rep.a_unilateral = sup_diff;

  // prime-power moderation sum, truncated with a geometric/integral tail bound
  double eta = spec.eta();
  KahanSum csum;
  double last_term = 0.0;
  std::uint64_t p_trunc = std::max<std::uint64_t>(floor_u64(z_max), 100000);
  for (std::uint64_t p : primes_up_to(p_trunc).primes) {
    double pd = static_cast<double>(p);
    double prev = 0.0;
    KahanSum per_p;
    for (unsigned nu = 2; nu <= 500; ++nu) {
      double t = spec.value(p, nu) / std::pow(pd, (1.0 - eta) * nu);
      per_p.add(t);
      if (t != 0.0 && prev > 0.0 && t >= prev * (1.0 - 1e-12))
        throw std::domain_error("hypothesis_report: divergent c_sum");
      prev = t > 0.0 ? t : prev;
      if (t < 1e-18 && nu > 4) break;
    }
    csum.add(per_p.value());
    last_term = per_p.value();
  }
  double tail = last_term * static_cast<double>(p_trunc) / (1.0 - 2.0 * eta);
  rep.c_sum = csum.value() + std::max(0.0, tail);

  auto [zz1, zz2] = z_moments(z_max, spec);
  rep.z1 = zz1;
  rep.z2 = zz2;
  return rep;
}

FriableSumReport friable_report(double x, double y,
                                const MultiplicativeSpec& spec, Kappa kappa,
                                const specfn::RhoTable& rho,
                                const EnumBudget& budget) {
  FriableSumReport rep;
  rep.x = x;
  rep.y = y;
  rep.u = std::log(x) / std::log(y);
  rep.psi = psi_f(x, y, spec, budget);
  rep.f1y = f1y(y, spec);
  rep.psi_star = std::max(0.0, rep.f1y - rep.psi);
  rep.lambda_u = specfn::lambda_kappa(rep.u, rho);
  rep.deviation = rep.psi_star / (rep.f1y * rep.lambda_u);
  if (x >= y && y >= 3.0) {
    Envelopes env = envelopes(x, y, kappa, spec, 1.0);
    rep.envelope_thm31 = env.thm31;
    rep.envelope_thm32 = env.thm32;
  } else {
    rep.envelope_thm31 = NAN;  // outside the envelope domain x >= y >= 3
    rep.envelope_thm32 = NAN;
  }
  return rep;
}

CkappaEstimate c_kappa_f(const MultiplicativeSpec& spec, Kappa kappa,
                         std::uint64_t p_cut) {
  double kv = kappa.value();
  KahanSum log_prod;
  for (std::uint64_t p : primes_up_to(p_cut).primes) {
    double pd = static_cast<double>(p);
    double local_minus_1 = static_cast<double>(local_factor(spec, p) - 1.0L);
    log_prod.add(kv * std::log1p(-1.0 / pd) + std::log1p(local_minus_1));
  }
  CkappaEstimate est;
  est.value = std::exp(log_prod.value());
  double rf = r_f(static_cast<double>(p_cut), kappa, spec);
  est.error_bar =
      est.value * 2.0 * (std::fabs(rf) + kv + 1.0) / std::log(p_cut);
  return est;
}

}  // namespace arith
}  // namespace friable
