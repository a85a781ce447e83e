#include "friable/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace friable {
namespace sieve {

namespace {

std::uint64_t pow_u64(std::uint64_t p, unsigned nu) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < nu; ++i) {
    if (r > UINT64_MAX / p) throw std::overflow_error("prime power overflow");
    r *= p;
  }
  return r;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      unsigned nu = 0;
      while (n % d == 0) {
        n /= d;
        ++nu;
      }
      out.push_back({d, nu});
    }
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::uint64_t mod_i64(std::int64_t a, std::uint64_t m) {
  std::int64_t r = a % static_cast<std::int64_t>(m);
  if (r < 0) r += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r);
}

}  // namespace

// ---------------------------------------------------------------------------
// ResidueSystem

ResidueSystem::ResidueSystem(
    std::map<PrimePower, std::vector<std::uint64_t>> w)
    : entries_(std::move(w)) {
  for (auto& [pp, classes] : entries_) {
    std::uint64_t modulus = pow_u64(pp.first, pp.second);
    for (std::uint64_t r : classes)
      if (r >= modulus)
        throw std::invalid_argument("ResidueSystem: residue out of range");
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  }
  // disjointness across powers of the same prime: lifts of W(p^mu) and
  // W(p^nu) to the common modulus must not meet
  for (const auto& [pp, classes] : entries_) {
    for (const auto& [pp2, classes2] : entries_) {
      if (pp.first != pp2.first || pp.second >= pp2.second) continue;
      std::uint64_t pmu = pow_u64(pp.first, pp.second);
      for (std::uint64_t s : classes2) {
        if (std::binary_search(classes.begin(), classes.end(), s % pmu))
          throw std::invalid_argument(
              "ResidueSystem: classes at distinct powers are not disjoint");
      }
    }
  }
}

bool ResidueSystem::defined(std::uint64_t p, unsigned nu) const {
  return entries_.count({p, nu}) != 0;
}

const std::vector<std::uint64_t>* ResidueSystem::classes(std::uint64_t p,
                                                         unsigned nu) const {
  auto it = entries_.find({p, nu});
  return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// DensityFunction

DensityFunction::DensityFunction(std::map<PrimePower, double> w)
    : w_(std::move(w)) {
  for (auto it = w_.begin(); it != w_.end();) {
    if (!(it->second >= 0.0))
      throw std::invalid_argument("DensityFunction: w must be nonnegative");
    if (it->second == 0.0)
      it = w_.erase(it);
    else
      ++it;
  }
  for (const auto& [pp, v] : w_) support_.push_back(pp);
  std::sort(support_.begin(), support_.end(),
            [](const PrimePower& a, const PrimePower& b) {
              return pow_u64(a.first, a.second) < pow_u64(b.first, b.second);
            });
}

double DensityFunction::w(std::uint64_t p, unsigned nu) const {
  auto it = w_.find({p, nu});
  return it == w_.end() ? 0.0 : it->second;
}

double DensityFunction::w_multiplicative(std::uint64_t d) const {
  if (d == 0) throw std::invalid_argument("w_multiplicative: d >= 1");
  double out = 1.0;
  for (auto [p, nu] : factorize(d)) out *= w(p, nu);
  return out;
}

double theta(const DensityFunction& density, std::uint64_t p, unsigned nu) {
  double s = 0.0;
  double pw = 1.0;
  for (unsigned mu = 1; mu <= nu; ++mu) {
    pw *= static_cast<double>(p);
    s += density.w(p, mu) / pw;
  }
  double th = 1.0 - s;
  if (!(th > 0.0))
    throw std::domain_error("theta: inadmissible density (theta <= 0)");
  return th;
}

double g_val(const DensityFunction& density, std::uint64_t p, unsigned nu) {
  if (nu < 1) throw std::invalid_argument("g_val: nu >= 1");
  double th_prev = theta(density, p, nu - 1);
  double th = theta(density, p, nu);
  return (th_prev - th) * th / th_prev;
}

double t_star(const DensityFunction& density, std::uint64_t p, unsigned mu,
              unsigned nu) {
  if (mu == 0) return nu == 0 ? 1.0 : 0.0;
  if (nu > mu) return 0.0;
  if (nu == mu) return 1.0;
  double th_prev = theta(density, p, mu - 1);
  double th = theta(density, p, mu);
  double delta = (th_prev - th) / th_prev;
  return nu == 0 ? -delta : delta;
}

int epsilon(std::uint64_t d, std::uint64_t d_prime) {
  if (d == 0 || d_prime == 0) throw std::invalid_argument("epsilon: d >= 1");
  for (auto [p, mu] : factorize(d)) {
    unsigned nu = 0;
    std::uint64_t q = d_prime;
    while (q % p == 0) {
      q /= p;
      ++nu;
    }
    if (nu != 0 && nu != mu) return 0;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// instance plumbing

void SieveInstance::validate() const {
  if (!(d_cutoff > 1.0))
    throw std::invalid_argument("SieveInstance: level D must exceed 1");
  if (!(z >= 2.0)) throw std::invalid_argument("SieveInstance: z >= 2");
  if (!(x_mass >= 0.0)) throw std::invalid_argument("SieveInstance: X >= 0");
  auto in_pz = [&](std::uint64_t p) {
    return p <= z && std::find(prime_set.begin(), prime_set.end(), p) !=
                         prime_set.end();
  };
  for (const auto& [pp, v] : density.entries())
    if (!in_pz(pp.first))
      throw std::invalid_argument(
          "SieveInstance: density supported outside P_z");
  for (const auto& [pp, cls] : residues.entries())
    if (!in_pz(pp.first))
      throw std::invalid_argument("SieveInstance: residues outside P_z");
  // admissibility at the deepest supported power of each prime
  for (const auto& [pp, v] : density.entries())
    theta(density, pp.first, pp.second);
}

std::vector<std::uint64_t> support_lattice(const SieveInstance& instance,
                                           double limit) {
  // group supported powers by prime
  std::vector<std::pair<std::uint64_t, std::vector<unsigned>>> groups;
  for (const auto& [p, nu] : instance.density.support()) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == p; });
    if (it == groups.end())
      groups.push_back({p, {nu}});
    else
      it->second.push_back(nu);
  }
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> stack{1};
  // depth-first over prime groups
  std::function<void(std::size_t, std::uint64_t)> rec =
      [&](std::size_t gi, std::uint64_t m) {
        if (gi == groups.size()) {
          out.push_back(m);
          return;
        }
        rec(gi + 1, m);  // exponent 0
        for (unsigned nu : groups[gi].second) {
          std::uint64_t pp = pow_u64(groups[gi].first, nu);
          if (static_cast<double>(m) * static_cast<double>(pp) > limit) continue;
          rec(gi + 1, m * pp);
        }
        if (out.size() > 4'000'000)
          throw std::length_error("support lattice exceeds budget");
      };
  rec(0, 1);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct LatticeElement {
  std::uint64_t m;
  std::vector<PrimePower> factors;  // supported powers only
  double g = 1.0;                   // g(m)
  double t1 = 1.0;                  // t*(m, 1)
};

std::vector<LatticeElement> factored_lattice(const SieveInstance& inst,
                                             double limit) {
  std::vector<LatticeElement> out;
  for (std::uint64_t m : support_lattice(inst, limit)) {
    LatticeElement el;
    el.m = m;
    el.factors = factorize(m);
    for (auto [p, nu] : el.factors) {
      el.g *= g_val(inst.density, p, nu);
      el.t1 *= t_star(inst.density, p, nu, 0);
    }
    out.push_back(std::move(el));
  }
  return out;
}

double t_star_general(const SieveInstance& inst, const LatticeElement& el,
                      const std::vector<PrimePower>& d_factors) {
  double prod = 1.0;
  for (auto [p, mu] : el.factors) {
    unsigned nu = 0;
    for (auto [q, e] : d_factors)
      if (q == p) nu = e;
    prod *= t_star(inst.density, p, mu, nu);
    if (prod == 0.0) return 0.0;
  }
  for (auto [q, e] : d_factors) {
    bool in_m = false;
    for (auto [p, mu] : el.factors)
      if (p == q) in_m = true;
    if (!in_m && e > 0) return 0.0;  // t*(p^0, p^e) = 0
  }
  return prod;
}

}  // namespace

double lambda_star(const SieveInstance& instance, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("lambda_star: d >= 1");
  if (static_cast<double>(d) > instance.d_cutoff) return 0.0;
  auto lattice = factored_lattice(instance, instance.d_cutoff);
  auto d_factors = factorize(d);
  KahanSum num, den;
  for (const auto& el : lattice) {
    if (el.g == 0.0) continue;  // t*(m,1) = 0 there as well; contributes 0
    den.add(el.t1 * el.t1 / el.g);
    double td = t_star_general(instance, el, d_factors);
    if (td != 0.0) num.add(td * el.t1 / el.g);
  }
  if (den.value() == 0.0)
    throw std::domain_error("lambda_star: degenerate density (empty sum)");
  return num.value() / den.value();
}

arith::MultiplicativeSpec sieve_density_spec(const SieveInstance& instance) {
  std::map<std::pair<std::uint64_t, unsigned>, double> entries;
  std::map<std::uint64_t, unsigned> top;
  for (const auto& [pp, v] : instance.density.entries())
    top[pp.first] = std::max(top[pp.first], pp.second);
  for (const auto& [p, max_nu] : top) {
    for (unsigned nu = 1; nu <= max_nu; ++nu) {
      double th = theta(instance.density, p, nu);
      double th_prev = theta(instance.density, p, nu - 1);
      double pw = static_cast<double>(pow_u64(p, nu));
      double f = pw / th - pw / th_prev;
      if (f != 0.0) entries[{p, nu}] = f;
    }
  }
  return arith::MultiplicativeSpec::table(std::move(entries));
}

double main_term(const SieveInstance& instance) {
  auto spec = sieve_density_spec(instance);
  double denom = arith::psi_f(instance.d_cutoff, instance.z, spec);
  return instance.x_mass / denom;
}

double quadratic_form(const SieveInstance& instance) {
  auto lattice = support_lattice(instance, instance.d_cutoff);
  std::vector<double> lam(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i)
    lam[i] = lambda_star(instance, lattice[i]);
  KahanSum q;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      if (!epsilon(lattice[i], lattice[j])) continue;
      std::uint64_t l = std::lcm(lattice[i], lattice[j]);
      q.add(lam[i] * lam[j] * instance.density.w_multiplicative(l) /
            static_cast<double>(l));
    }
  }
  return q.value();
}

namespace {

// count of a in A with a in W(d); zero when some component class is absent
double exact_count_in_w(const SieveInstance& inst,
                        const std::vector<PrimePower>& factors) {
  std::vector<std::pair<std::uint64_t, const std::vector<std::uint64_t>*>>
      checks;
  for (auto [p, nu] : factors) {
    const auto* cls = inst.residues.classes(p, nu);
    if (cls == nullptr || cls->empty()) return 0.0;
    checks.push_back({pow_u64(p, nu), cls});
  }
  std::int64_t count = 0;
  for (std::int64_t a : inst.sequence) {
    bool in = true;
    for (const auto& [mod, cls] : checks) {
      if (!std::binary_search(cls->begin(), cls->end(), mod_i64(a, mod))) {
        in = false;
        break;
      }
    }
    if (in) ++count;
  }
  return static_cast<double>(count);
}

}  // namespace

double remainder_bound(const SieveInstance& instance) {
  double d2 = instance.d_cutoff * instance.d_cutoff;
  // index set: products of prime powers that carry density or classes
  std::map<PrimePower, double> merged;
  for (const auto& [pp, v] : instance.density.entries()) merged[pp] = v;
  for (const auto& [pp, cls] : instance.residues.entries())
    merged.try_emplace(pp, instance.density.w(pp.first, pp.second));
  SieveInstance indexed = instance;
  {
    std::map<PrimePower, double> positive;
    for (const auto& [pp, v] : merged) positive[pp] = (v > 0.0) ? v : 1.0;
    indexed.density = DensityFunction(std::move(positive));
  }
  KahanSum total;
  for (std::uint64_t m : support_lattice(indexed, d2)) {
    if (m == 1) {
      double r1 = static_cast<double>(instance.sequence.size()) -
                  instance.x_mass;
      if (instance.supplied_remainders) {
        auto it = instance.supplied_remainders->find(1);
        r1 = (it == instance.supplied_remainders->end()) ? r1 : it->second;
      }
      total.add(std::fabs(r1));
      continue;
    }
    auto factors = factorize(m);
    double r;
    if (instance.supplied_remainders) {
      auto it = instance.supplied_remainders->find(m);
      if (it == instance.supplied_remainders->end())
        throw std::invalid_argument("remainder_bound: missing supplied r_m");
      r = it->second;
    } else {
      double count = exact_count_in_w(instance, factors);
      double w = instance.density.w_multiplicative(m);
      r = count - w / static_cast<double>(m) * instance.x_mass;
    }
    if (r == 0.0) continue;
    double three_omega = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) three_omega *= 3.0;
    total.add(three_omega * std::fabs(r));
  }
  return total.value();
}

std::int64_t brute_count(const SieveInstance& instance) {
  std::int64_t surviving = 0;
  for (std::int64_t a : instance.sequence) {
    bool sifted = false;
    for (const auto& [pp, cls] : instance.residues.entries()) {
      if (cls.empty()) continue;
      std::uint64_t mod = pow_u64(pp.first, pp.second);
      if (std::binary_search(cls.begin(), cls.end(), mod_i64(a, mod))) {
        sifted = true;
        break;
      }
    }
    if (!sifted) ++surviving;
  }
  return surviving;
}

SieveReport sieve_bound(const SieveInstance& instance, bool with_brute) {
  instance.validate();
  SieveReport rep;
  rep.main_term = main_term(instance);
  rep.remainder = remainder_bound(instance);
  rep.bound = rep.main_term + rep.remainder;
  if (with_brute) rep.brute_count = brute_count(instance);
  for (std::uint64_t d : support_lattice(instance, instance.d_cutoff))
    rep.weights_max_abs =
        std::max(rep.weights_max_abs, std::fabs(lambda_star(instance, d)));
  return rep;
}

// ---------------------------------------------------------------------------
// interval-polynomial application

PolySieveReport polynomial_interval_sieve(std::int64_t lo, std::int64_t hi,
                                     std::uint64_t q, const Polynomial& g,
                                     double d_cutoff) {
  if (hi < lo) throw std::invalid_argument("polynomial_interval_sieve: empty I");
  if (q < 1) throw std::invalid_argument("polynomial_interval_sieve: q >= 1");
  double n_len = static_cast<double>(hi - lo + 1);
  PolySieveReport out;

  if (q == 1) {
    out.report.main_term = n_len;
    out.report.bound = n_len;
    out.report.brute_count = static_cast<std::int64_t>(n_len);
    out.report.weights_max_abs = 1.0;
    out.w_qg = 1.0;
    return out;
  }

  auto q_factors = factorize(q);
  std::map<PrimePower, std::vector<std::uint64_t>> classes;
  std::map<PrimePower, double> dens;
  double w_qg = 1.0;
  for (auto [p, nu] : q_factors) {
    auto roots = poly_roots_mod(p, nu, g);
    std::uint64_t pp = pow_u64(p, nu);
    std::uint64_t rho = roots.size();
    out.rho_values[pp] = rho;
    w_qg *= 1.0 - static_cast<double>(rho) / static_cast<double>(pp);
    if (rho == pp) out.degenerate = true;
    classes[{p, nu}] = std::move(roots);
    dens[{p, nu}] = static_cast<double>(rho);
  }
  out.w_qg = w_qg;
  if (out.degenerate) {
    // G vanishes identically modulo some p^nu || q: every n is sifted
    out.report.brute_count = 0;
    return out;
  }

  SieveInstance inst;
  inst.sequence.reserve(static_cast<std::size_t>(n_len));
  for (std::int64_t n = lo; n <= hi; ++n) inst.sequence.push_back(n);
  for (auto [p, nu] : q_factors) inst.prime_set.push_back(p);
  inst.z = static_cast<double>(q_factors.back().first);  // P(q)
  inst.d_cutoff = (d_cutoff > 1.0) ? d_cutoff : std::max(2.0, std::sqrt(n_len));
  inst.x_mass = n_len;
  inst.density = DensityFunction(std::move(dens));
  inst.residues = ResidueSystem(std::move(classes));
  out.report = sieve_bound(inst, true);
  return out;
}

LevelEnvelope sieve_level_envelope(double d_cutoff, double z, int s, double eta,
                               Kappa kappa) {
  if (!(d_cutoff > z) || !(z >= 2.0) || s < 1)
    throw std::invalid_argument("sieve_level_envelope: need D > z >= 2, s >= 1");
  if (!(eta > 0.0 && eta < 0.5))
    throw std::invalid_argument("sieve_level_envelope: eta in (0, 1/2)");
  double logd = std::log(d_cutoff);
  LevelEnvelope env;
  double second = (std::log(logd) > 0.0)
                      ? 3.0 * logd / (s * eta * std::log(logd))
                      : INFINITY;
  env.v = std::min(logd / (s * std::log(z)), second);
  auto tab = specfn::RhoTable::build(kappa);
  if (env.v > tab.u_max() - 1.0) {
    // beyond the table the tail is below 1e-30: j = 1, lambda+ = 0
    env.j_kappa_v = 1.0;
    env.lambda_plus = 0.0;
    return env;
  }
  double lam = specfn::lambda_kappa(env.v, tab);
  env.j_kappa_v = 1.0 - lam;
  env.lambda_plus = lam * env.v * std::log1p(env.v);
  return env;
}

}  // namespace sieve
}  // namespace friable
