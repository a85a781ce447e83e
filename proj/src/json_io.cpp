#include "friable/json_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace friable {
namespace io {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument(std::string(what) + ": unknown key '" +
                                  it.key() + "'");
}

std::pair<std::uint64_t, unsigned> parse_prime_power(const std::string& key) {
  auto caret = key.find('^');
  try {
    std::uint64_t p = std::stoull(key.substr(0, caret));
    unsigned nu = 1;
    if (caret != std::string::npos)
      nu = static_cast<unsigned>(std::stoul(key.substr(caret + 1)));
    if (p < 2 || nu < 1) throw std::invalid_argument("bad prime power");
    return {p, nu};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad prime-power key '" + key + "'");
  }
}

std::string prime_power_key(std::uint64_t p, unsigned nu) {
  return std::to_string(p) + "^" + std::to_string(nu);
}

sieve::Polynomial poly_from_json(const json& coeffs) {
  if (!coeffs.is_array())
    throw std::invalid_argument("poly_coeffs must be an array");
  std::vector<long long> c;
  for (const auto& v : coeffs) c.push_back(v.get<long long>());
  return sieve::Polynomial(std::move(c));
}

}  // namespace

arith::MultiplicativeSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("spec: missing 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  arith::MultiplicativeSpec spec = [&] {
    if (kind == "tau_kappa") {
      reject_unknown(j, {"kind", "kappa", "eta", "series_cutoff"}, "spec");
      return arith::MultiplicativeSpec::tau_kappa(j.at("kappa").get<double>());
    }
    if (kind == "squarefree_uniform") {
      reject_unknown(j, {"kind", "c", "eta", "series_cutoff"}, "spec");
      return arith::MultiplicativeSpec::squarefree_uniform(
          j.at("c").get<double>());
    }
    if (kind == "poly_density") {
      reject_unknown(j, {"kind", "poly_coeffs", "eta", "series_cutoff"},
                     "spec");
      return arith::MultiplicativeSpec::poly_density(
          poly_from_json(j.at("poly_coeffs")));
    }
    if (kind == "table") {
      reject_unknown(j, {"kind", "entries", "eta", "series_cutoff"}, "spec");
      std::map<std::pair<std::uint64_t, unsigned>, double> entries;
      for (auto it = j.at("entries").begin(); it != j.at("entries").end();
           ++it)
        entries[parse_prime_power(it.key())] = it.value().get<double>();
      return arith::MultiplicativeSpec::table(std::move(entries));
    }
    throw std::invalid_argument("spec: unknown kind '" + kind + "'");
  }();
  if (j.contains("eta")) spec.set_eta(j.at("eta").get<double>());
  if (j.contains("series_cutoff"))
    spec.set_series_cutoff(j.at("series_cutoff").get<int>());
  return spec;
}

json spec_to_json(const arith::MultiplicativeSpec& spec) {
  json j;
  using Kind = arith::MultiplicativeSpec::Kind;
  switch (spec.kind()) {
    case Kind::kTauKappa:
      j["kind"] = "tau_kappa";
      j["kappa"] = spec.kappa_param();
      break;
    case Kind::kSquarefreeUniform:
      j["kind"] = "squarefree_uniform";
      j["c"] = spec.c_param();
      break;
    case Kind::kPolyDensity:
      j["kind"] = "poly_density";
      j["poly_coeffs"] = spec.poly().coeffs();
      break;
    case Kind::kTable: {
      j["kind"] = "table";
      json entries = json::object();
      for (const auto& [pp, v] : spec.entries())
        entries[prime_power_key(pp.first, pp.second)] = v;
      j["entries"] = entries;
      break;
    }
  }
  j["eta"] = spec.eta();
  j["series_cutoff"] = spec.series_cutoff();
  return j;
}

SieveInput sieve_input_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("sieve instance: missing 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  SieveInput input;
  if (kind == "interval_poly") {
    reject_unknown(j, {"kind", "interval", "q", "poly_coeffs", "D"},
                   "sieve instance");
    auto iv = j.at("interval");
    if (!iv.is_array() || iv.size() != 2)
      throw std::invalid_argument("sieve instance: interval must be [lo, hi]");
    input.kind = SieveInput::Kind::kIntervalPoly;
    input.lo = iv[0].get<std::int64_t>();
    input.hi = iv[1].get<std::int64_t>();
    input.q = j.at("q").get<std::uint64_t>();
    input.poly = poly_from_json(j.at("poly_coeffs"));
    if (j.contains("D")) input.d_cutoff = j.at("D").get<double>();
    return input;
  }
  if (kind != "explicit")
    throw std::invalid_argument("sieve instance: unknown kind '" + kind + "'");
  reject_unknown(j, {"kind", "A", "z", "D", "W", "w", "X", "P"},
                 "sieve instance");
  input.kind = SieveInput::Kind::kExplicit;
  sieve::SieveInstance& inst = input.instance;
  for (const auto& v : j.at("A")) inst.sequence.push_back(v.get<std::int64_t>());
  inst.z = j.at("z").get<double>();
  inst.d_cutoff = j.at("D").get<double>();
  std::map<sieve::PrimePower, std::vector<std::uint64_t>> classes;
  if (j.contains("W"))
    for (auto it = j.at("W").begin(); it != j.at("W").end(); ++it) {
      std::vector<std::uint64_t> cls;
      for (const auto& r : it.value()) cls.push_back(r.get<std::uint64_t>());
      classes[parse_prime_power(it.key())] = std::move(cls);
    }
  std::map<sieve::PrimePower, double> dens;
  if (j.contains("w"))
    for (auto it = j.at("w").begin(); it != j.at("w").end(); ++it)
      dens[parse_prime_power(it.key())] = it.value().get<double>();
  if (j.contains("P")) {
    for (const auto& p : j.at("P"))
      inst.prime_set.push_back(p.get<std::uint64_t>());
  } else {
    std::set<std::uint64_t> ps;
    for (const auto& [pp, v] : classes) ps.insert(pp.first);
    for (const auto& [pp, v] : dens) ps.insert(pp.first);
    inst.prime_set.assign(ps.begin(), ps.end());
  }
  inst.x_mass = j.contains("X") ? j.at("X").get<double>()
                                : static_cast<double>(inst.sequence.size());
  inst.residues = sieve::ResidueSystem(std::move(classes));
  inst.density = sieve::DensityFunction(std::move(dens));
  return input;
}

json sieve_input_to_json(const SieveInput& input) {
  json j;
  if (input.kind == SieveInput::Kind::kIntervalPoly) {
    j["kind"] = "interval_poly";
    j["interval"] = {input.lo, input.hi};
    j["q"] = input.q;
    j["poly_coeffs"] = input.poly.coeffs();
    if (input.d_cutoff > 0.0) j["D"] = input.d_cutoff;
    return j;
  }
  const sieve::SieveInstance& inst = input.instance;
  j["kind"] = "explicit";
  j["A"] = inst.sequence;
  j["z"] = inst.z;
  j["D"] = inst.d_cutoff;
  j["X"] = inst.x_mass;
  j["P"] = inst.prime_set;
  json w = json::object(), cls = json::object();
  for (const auto& [pp, v] : inst.density.entries())
    w[prime_power_key(pp.first, pp.second)] = v;
  for (const auto& [pp, v] : inst.residues.entries())
    cls[prime_power_key(pp.first, pp.second)] = v;
  j["w"] = w;
  j["W"] = cls;
  return j;
}

arith::MultiplicativeSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  json j;
  in >> j;
  return spec_from_json(j);
}

SieveInput load_sieve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  json j;
  in >> j;
  return sieve_input_from_json(j);
}

}  // namespace io
}  // namespace friable
