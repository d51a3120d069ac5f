#pragma once

// Monogamy relations obtained by summing a base Bell functional over every
// index-ordered subset of parties of one larger experiment.

#include <array>
#include <optional>
#include <string>

#include "monobell/bell_core.hpp"
#include "monobell/functional_io.hpp"

namespace monobell {

struct WiringProvenance {
  std::string base;       // free-form name of the base inequality
  std::size_t n = 0;      // parties in the wired experiment
  std::size_t m = 0;      // parties per base copy
  std::string embedding;  // how non-participating parties are handled
};

struct MonogamyRelation {
  BellFunctional functional;
  std::optional<CorrelatorFunctional> correlator_form;
  double bound = 0.0;  // classical_bound(base) * C(n, m)
  WiringProvenance provenance;
};

std::uint64_t binomial(std::size_t n, std::size_t k);

/// Scenario guard for wired functionals (input tuples x output tuples).
inline constexpr std::size_t kMaxWiredTableSize = std::size_t{1} << 20;

/// Sum of the base over all C(n, m) subsets. Parties outside a subset are
/// fixed to input 0 and their outputs summed over. The base must give every
/// party the same number of inputs and outputs.
MonogamyRelation wire_m_of_n(const BellFunctional& base, std::size_t n, std::string base_name = "base");
MonogamyRelation wire_m_of_n(const CorrelatorFunctional& base, std::size_t n, std::string base_name = "base");
MonogamyRelation wire_pairwise(const BellFunctional& base, std::size_t n, std::string base_name = "base");
MonogamyRelation wire_pairwise(const CorrelatorFunctional& base, std::size_t n, std::string base_name = "base");

/// The two-party CHSH correlator functional, declared bound 2.
CorrelatorFunctional chsh();

/// Three CHSH blocks, one per party holding input 2. `signs` are the
/// coefficients of the (0,0), (0,1), (1,0), (1,1) input pairs in every block.
CorrelatorFunctional tripartite_wired_chsh(const std::array<double, 4>& signs = {1.0, 1.0, 1.0, -1.0});

struct MonogamyReport {
  double classical = 0.0;
  double no_signaling = 0.0;
  double bound = 0.0;
  bool holds = false;  // no_signaling <= bound + 1e-8
};

MonogamyReport verify_monogamy(const MonogamyRelation& r);

Json to_json(const MonogamyRelation& r);
MonogamyRelation monogamy_from_json(const Json& j);

}  // namespace monobell
