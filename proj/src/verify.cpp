#include "friable/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace friable {
namespace verify {

namespace {

// uniform helpers over a raw mt19937 stream (distribution objects are not
// bit-stable across standard libraries)
double unit(std::mt19937& rng) { return rng() / 4294967296.0; }
std::uint64_t pick(std::mt19937& rng, std::uint64_t n) { return rng() % n; }

arith::MultiplicativeSpec random_squarefree_spec(std::mt19937& rng, double y) {
  std::map<std::pair<std::uint64_t, unsigned>, double> e;
  for (std::uint64_t p : arith::primes_up_to(static_cast<std::uint64_t>(y)).primes)
    e[{p, 1}] = 3.0 * unit(rng);
  return arith::MultiplicativeSpec::table(std::move(e));
}

SuiteRow identity_row(const std::string& suite, const std::string& id,
                      const arith::IdentityCheck& chk, double rel_tol) {
  SuiteRow row;
  row.suite = suite;
  row.case_id = id;
  row.lhs = chk.lhs;
  row.rhs = chk.rhs;
  row.residual = chk.residual;
  double scale = std::max(std::fabs(chk.lhs), std::fabs(chk.rhs));
  row.tolerance = rel_tol * scale + 1e-13;
  row.pass = std::fabs(chk.residual) <= row.tolerance;
  return row;
}

}  // namespace

sieve::SieveInstance random_instance(std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed * 2654435761u + 12345u));
  sieve::SieveInstance inst;

  std::size_t len = 200 + pick(rng, 9800);
  std::int64_t start = static_cast<std::int64_t>(pick(rng, 100000)) - 50000;
  inst.sequence.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    inst.sequence.push_back(start + static_cast<std::int64_t>(i) +
                            static_cast<std::int64_t>(pick(rng, 3)));

  static const std::uint64_t pool[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  std::map<sieve::PrimePower, std::vector<std::uint64_t>> classes;
  std::map<sieve::PrimePower, double> dens;
  for (std::uint64_t p : pool) {
    if (unit(rng) < 0.45) continue;
    inst.prime_set.push_back(p);
    // at most two powers; base residues distinct mod p keep the classes
    // at different powers disjoint
    unsigned max_pow = 1 + (p <= 5 ? pick(rng, 2) : 0);
    std::vector<std::uint64_t> bases;
    for (std::uint64_t b = 0; b < p; ++b)
      if (unit(rng) < 0.35 && bases.size() + 1 < p) bases.push_back(b);
    if (bases.empty()) continue;
    std::size_t split = 1 + pick(rng, bases.size());
    for (unsigned nu = 1; nu <= max_pow; ++nu) {
      std::vector<std::uint64_t> cls;
      std::uint64_t modulus = 1;
      for (unsigned i = 0; i < nu; ++i) modulus *= p;
      auto lo_it = (nu == 1) ? bases.begin() : bases.begin() + split;
      auto hi_it = (nu == 1) ? bases.begin() + split : bases.end();
      if (max_pow == 1) hi_it = bases.end();
      for (auto it = lo_it; it != hi_it; ++it)
        cls.push_back((*it + p * pick(rng, modulus / p)) % modulus);
      if (cls.empty()) continue;
      std::sort(cls.begin(), cls.end());
      cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
      classes[{p, nu}] = cls;
      // density near the true one, sometimes perturbed
      double w = static_cast<double>(cls.size()) * (0.6 + 0.8 * unit(rng));
      dens[{p, nu}] = w;
    }
    if (inst.prime_set.size() >= 6) break;
  }
  if (inst.prime_set.empty()) {
    inst.prime_set.push_back(2);
    classes[{2, 1}] = {0};
    dens[{2, 1}] = 1.0;
  }
  // keep the density mass admissible with headroom
  std::map<std::uint64_t, double> mass;
  for (const auto& [pp, w] : dens) {
    double modulus = std::pow(static_cast<double>(pp.first),
                              static_cast<double>(pp.second));
    mass[pp.first] += w / modulus;
  }
  for (auto& [pp, w] : dens) {
    double m = mass[pp.first];
    if (m >= 0.95) w *= 0.9 / m;
  }

  inst.z = 29.0 + pick(rng, 20);
  inst.d_cutoff = 2.0 + unit(rng) * 60.0;
  inst.x_mass = static_cast<double>(len) * (0.8 + 0.4 * unit(rng));
  inst.density = sieve::DensityFunction(std::move(dens));
  inst.residues = sieve::ResidueSystem(std::move(classes));
  return inst;
}

SuiteResult run_eq73(std::uint64_t seed, int instances) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  SuiteResult res;
  auto sf = arith::MultiplicativeSpec::squarefree_uniform(1.0);
  res.rows.push_back(identity_row(
      "eq73", "canonical_x20_y5", arith::verify_star_equation(20, 5, Kappa(1.0), sf),
      1e-10));
  for (int i = 0; i < instances; ++i) {
    double y = 3.0 + pick(rng, 48);
    double x = std::max(2.0, 10.0 + static_cast<double>(pick(rng, 9991)));
    double kv = 0.5 + 2.0 * unit(rng);
    auto spec = random_squarefree_spec(rng, y);
    res.rows.push_back(identity_row(
        "eq73", "rand_" + std::to_string(i),
        arith::verify_star_equation(x, y, Kappa(kv), spec), 1e-10));
  }
  return res;
}

SuiteResult run_eq82(std::uint64_t seed, int instances) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed) + 17u);
  SuiteResult res;
  res.rows.push_back(identity_row(
      "eq82", "f1_x50",
      arith::verify_initial_equation(50, Kappa(1.0), arith::MultiplicativeSpec::tau_kappa(1.0)),
      1e-10));
  res.rows.push_back(identity_row(
      "eq82", "tau2_x30",
      arith::verify_initial_equation(30, Kappa(2.0), arith::MultiplicativeSpec::tau_kappa(2.0)),
      1e-10));
  for (int i = 0; i < instances; ++i) {
    double y = 3.0 + pick(rng, 48);
    double x = std::max(2.0, 10.0 + static_cast<double>(pick(rng, 1990)));
    double kv = 0.5 + 2.0 * unit(rng);
    auto spec = random_squarefree_spec(rng, y);
    res.rows.push_back(identity_row("eq82", "rand_" + std::to_string(i),
                                    arith::verify_initial_equation(x, Kappa(kv), spec),
                                    1e-10));
  }
  return res;
}

SuiteResult run_adjoint_identity(std::uint64_t) {
  SuiteResult res;
  for (double kv : {1.0, 2.0}) {
    Kappa k(kv);
    auto tab = specfn::RhoTable::build(k);
    for (double u : {1.5, 2.0, 3.0, 5.0}) {
      double lhs = u * specfn::lambda_kappa(u, tab) * specfn::mu_kappa(u, k);
      auto f = [&](double v) {
        return specfn::lambda_kappa(v, tab) * specfn::mu_kappa(v + 1.0, k);
      };
      double rhs =
          kv * adaptive_simpson(f, u - 1.0, u, 1e-11 * std::fabs(lhs));
      SuiteRow row;
      row.suite = "adjoint";
      row.case_id = "u" + std::to_string(u) + "_k" + std::to_string(kv);
      row.lhs = lhs;
      row.rhs = rhs;
      row.residual = lhs - rhs;
      row.tolerance = 1e-7 * std::fabs(lhs);
      row.pass = std::fabs(row.residual) <= row.tolerance;
      res.rows.push_back(row);
    }
  }
  return res;
}

SuiteResult run_quadform(std::uint64_t seed, int instances) {
  SuiteResult res;
  for (int i = 0; i < instances; ++i) {
    auto inst = random_instance(seed * 1000 + 500 + i);
    inst.d_cutoff = std::min(inst.d_cutoff * 4.0, 200.0);
    double q = sieve::quadratic_form(inst);
    double psi = arith::psi_f(inst.d_cutoff, inst.z,
                              sieve::sieve_density_spec(inst));
    SuiteRow row;
    row.suite = "quadform";
    row.case_id = "inst_" + std::to_string(i);
    row.lhs = q;
    row.rhs = 1.0 / psi;
    row.residual = row.lhs - row.rhs;
    row.tolerance = 1e-9 * std::fabs(row.rhs);
    row.pass = std::fabs(row.residual) <= row.tolerance;
    res.rows.push_back(row);
  }
  return res;
}

SuiteResult run_normalization(std::uint64_t) {
  SuiteResult res;
  for (double kv : {0.5, 1.0, 2.0, 3.0}) {
    auto tab = specfn::RhoTable::build(Kappa(kv));
    SuiteRow row;
    row.suite = "normalization";
    row.case_id = "kappa_" + std::to_string(kv);
    row.lhs = tab.gamma_kappa_norm();
    row.rhs = std::exp(kEulerGamma * kv);
    row.residual = row.lhs - row.rhs;
    row.tolerance = 1e-6 * row.rhs;
    row.pass = std::fabs(row.residual) <= row.tolerance;
    res.rows.push_back(row);
  }
  return res;
}

SuiteResult run_sieve_validity(std::uint64_t seed, int instances) {
  SuiteResult res;
  for (int i = 0; i < instances; ++i) {
    auto inst = random_instance(seed * 100000 + i);
    auto rep = sieve::sieve_bound(inst, true);
    SuiteRow row;
    row.suite = "sieve";
    row.case_id = "inst_" + std::to_string(i);
    row.lhs = static_cast<double>(rep.brute_count);
    row.rhs = rep.bound;
    row.residual = row.lhs - row.rhs;  // must be <= 0 (+ rounding headroom)
    row.tolerance = 1e-9 * std::max(1.0, rep.bound);
    row.pass = row.residual <= row.tolerance &&
               rep.weights_max_abs <= 1.0 + 1e-12;
    res.rows.push_back(row);
  }
  return res;
}

std::vector<std::string> suite_names() {
  return {"eq73", "eq82", "adjoint", "quadform", "normalization", "sieve"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "eq73") return run_eq73(seed);
  if (name == "eq82") return run_eq82(seed);
  if (name == "adjoint") return run_adjoint_identity(seed);
  if (name == "quadform") return run_quadform(seed);
  if (name == "normalization") return run_normalization(seed);
  if (name == "sieve") return run_sieve_validity(seed);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace verify
}  // namespace friable
