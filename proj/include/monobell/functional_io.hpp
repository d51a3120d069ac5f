#pragma once

// JSON documents for functionals:
//
//   {"scenario": {"parties": 3, "inputs": [3,3,3], "outputs": [2,2,2]},
//    "correlator_terms": [{"inputs": [0, 0, 2], "coeff": 1.0}, ...],
//    "declared_bound": 6}
//
// A null (or -1) input marks a party absent from that correlator. Functionals
// that are not correlator-expressible use "probability_terms" with
// {"inputs", "outputs", "coeff"} entries instead. Doubles are written with
// round-trip precision.

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "monobell/bell_core.hpp"

namespace monobell {

using Json = nlohmann::json;

/// A functional as read from disk. `probability` is always populated.
struct FunctionalDocument {
  std::optional<CorrelatorFunctional> correlator;
  BellFunctional probability;
};

Json to_json(const Scenario& s);
Json to_json(const CorrelatorFunctional& f);
Json to_json(const BellFunctional& f);

Scenario scenario_from_json(const Json& j);
CorrelatorFunctional correlator_from_json(const Json& j);
FunctionalDocument functional_from_json(const Json& j);

/// {"re": [[...]], "im": [[...]]}, row-major.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace monobell
