#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "friable/csv.hpp"
#include "friable/json_io.hpp"
#include "friable/verify.hpp"

using namespace friable;
using nlohmann::json;

TEST_CASE("spec json round trips") {
  auto specs = {
      arith::MultiplicativeSpec::tau_kappa(1.5),
      arith::MultiplicativeSpec::squarefree_uniform(0.7),
      arith::MultiplicativeSpec::poly_density(sieve::Polynomial({-1, 0, 1})),
      arith::MultiplicativeSpec::table({{{2, 1}, 0.5}, {{3, 2}, 2.0}}),
  };
  std::mt19937 rng(3);
  for (const auto& spec : specs) {
    auto j = io::spec_to_json(spec);
    auto back = io::spec_from_json(j);
    CHECK(back.kind() == spec.kind());
    CHECK(back.eta() == spec.eta());
    CHECK(back.series_cutoff() == spec.series_cutoff());
    for (int i = 0; i < 40; ++i) {
      std::uint64_t p = arith::primes_up_to(50).primes[rng() % 15];
      unsigned nu = 1 + rng() % 3;
      CHECK(back.value(p, nu) == spec.value(p, nu));
    }
  }
}

TEST_CASE("spec json rejects unknown keys and bad values") {
  CHECK_THROWS(io::spec_from_json(json{{"kind", "tau_kappa"},
                                       {"kappa", 1.0},
                                       {"mystery", 3}}));
  CHECK_THROWS(io::spec_from_json(json{{"kind", "nope"}}));
  CHECK_THROWS(io::spec_from_json(json{{"kind", "tau_kappa"}}));  // no kappa
  CHECK_THROWS(io::spec_from_json(
      json{{"kind", "tau_kappa"}, {"kappa", 1.0}, {"eta", 0.7}}));
  CHECK_THROWS(io::spec_from_json(
      json{{"kind", "table"}, {"entries", {{"junk", 1.0}}}}));
  CHECK_NOTHROW(io::spec_from_json(json{
      {"kind", "squarefree_uniform"}, {"c", 1.0}, {"eta", 0.25},
      {"series_cutoff", 40}}));
}

TEST_CASE("sieve instance json round trips") {
  auto inst = verify::random_instance(21);
  io::SieveInput input;
  input.kind = io::SieveInput::Kind::kExplicit;
  input.instance = inst;
  auto j = io::sieve_input_to_json(input);
  auto back = io::sieve_input_from_json(j);
  CHECK(back.kind == io::SieveInput::Kind::kExplicit);
  CHECK(back.instance.sequence == inst.sequence);
  CHECK(back.instance.z == inst.z);
  CHECK(back.instance.d_cutoff == inst.d_cutoff);
  CHECK(back.instance.x_mass == inst.x_mass);
  CHECK(back.instance.density.entries() == inst.density.entries());
  CHECK(back.instance.residues.entries() == inst.residues.entries());
  // behavioral equality
  auto r1 = sieve::sieve_bound(inst, true);
  auto r2 = sieve::sieve_bound(back.instance, true);
  CHECK(r1.bound == r2.bound);
  CHECK(r1.brute_count == r2.brute_count);
}

TEST_CASE("interval_poly json") {
  json j{{"kind", "interval_poly"},
         {"interval", {1, 5000}},
         {"q", 15},
         {"poly_coeffs", {-1, 0, 1}}};
  auto input = io::sieve_input_from_json(j);
  CHECK(input.kind == io::SieveInput::Kind::kIntervalPoly);
  CHECK(input.lo == 1);
  CHECK(input.hi == 5000);
  CHECK(input.q == 15);
  CHECK(input.poly.degree() == 2);
  auto j2 = io::sieve_input_to_json(input);
  CHECK(io::sieve_input_from_json(j2).q == 15);
  CHECK_THROWS(io::sieve_input_from_json(json{{"kind", "interval_poly"}}));
  CHECK_THROWS(io::sieve_input_from_json(
      json{{"kind", "explicit"}, {"A", {1, 2}}, {"z", 2.0}, {"D", 3.0},
           {"oops", 1}}));
}

TEST_CASE("csv formatting is fixed-width scientific") {
  CHECK(io::csv_num(1.0) == "1.000000000000e+00");
  CHECK(io::csv_num(-0.5) == "-5.000000000000e-01");
  CHECK(io::csv_num(3.14159265358979) == "3.141592653590e+00");
}
