#ifndef FRIABLE_JSON_IO_HPP
#define FRIABLE_JSON_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "friable/arith.hpp"
#include "friable/sieve.hpp"

namespace friable {
namespace io {

// {"kind": "tau_kappa"|"squarefree_uniform"|"poly_density"|"table",
//  "kappa"|"c"|"poly_coeffs"|"entries": ..., "eta": 0.25,
//  "series_cutoff": 40}; unknown keys rejected. Entry keys are "p^nu"
// (a bare "p" means nu = 1).
arith::MultiplicativeSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const arith::MultiplicativeSpec& spec);

// Parsed sieve input: either a fully explicit instance or the
// interval-polynomial sieve parameters.
struct SieveInput {
  enum class Kind { kExplicit, kIntervalPoly };
  Kind kind = Kind::kExplicit;
  sieve::SieveInstance instance;  // kExplicit
  std::int64_t lo = 0, hi = 0;    // kIntervalPoly
  std::uint64_t q = 1;
  sieve::Polynomial poly;
  double d_cutoff = 0.0;  // 0: default sqrt(N)
};

// {"kind": "explicit"|"interval_poly", "A"|"interval": ..., "q": ...,
//  "poly_coeffs": [c0,c1,...], "z": ..., "D": ..., "W": {"p^nu": [r...]},
//  "w": {"p^nu": value}, "X": ...}; unknown keys rejected.
SieveInput sieve_input_from_json(const nlohmann::json& j);
nlohmann::json sieve_input_to_json(const SieveInput& input);

arith::MultiplicativeSpec load_spec_file(const std::string& path);
SieveInput load_sieve_file(const std::string& path);

}  // namespace io
}  // namespace friable

#endif  // FRIABLE_JSON_IO_HPP
