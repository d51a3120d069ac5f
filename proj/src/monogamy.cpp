#include "monobell/monogamy.hpp"

#include <algorithm>
#include <numeric>

namespace monobell {

namespace {

constexpr const char* kEmbedding = "non-participating parties at input 0, outputs summed";

void require_symmetric(const Scenario& sc) {
  for (std::size_t k = 1; k < sc.parties(); ++k)
    if (sc.inputs[k] != sc.inputs[0] || sc.outputs[k] != sc.outputs[0])
      throw ConfigError("wiring: base scenario must be the same for every party");
}

Scenario wired_scenario(const Scenario& base, std::size_t n) {
  if (base.parties() > n) throw ConfigError("wiring: base has more parties than the wired experiment");
  require_symmetric(base);
  Scenario out(std::vector<int>(n, base.inputs[0]), std::vector<int>(n, base.outputs[0]));
  const double size = static_cast<double>(out.input_tuples()) * static_cast<double>(out.output_tuples());
  if (size > static_cast<double>(kMaxWiredTableSize)) throw GuardExceeded("wiring: wired scenario too large");
  return out;
}

// Index-ordered m-subsets of {0..n-1}, lexicographic.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(m);
  std::iota(cur.begin(), cur.end(), 0);
  for (;;) {
    out.push_back(cur);
    std::size_t i = m;
    while (i > 0 && cur[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

MonogamyRelation finish(BellFunctional wired, std::optional<CorrelatorFunctional> corr, const BellFunctional& base,
                        std::size_t n, std::string name) {
  const std::size_t m = base.scenario().parties();
  const double c = classical_bound(base).value;
  const double bound = c * static_cast<double>(binomial(n, m));
  wired.declared_bound = bound;
  if (corr) corr->declared_bound = bound;
  return {std::move(wired), std::move(corr), bound, {std::move(name), n, m, kEmbedding}};
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MonogamyRelation wire_m_of_n(const BellFunctional& base, std::size_t n, std::string base_name) {
  const Scenario& bs = base.scenario();
  const Scenario ws = wired_scenario(bs, n);
  const std::size_t m = bs.parties();
  BellFunctional wired(ws);
  for (const auto& subset : subsets(n, m)) {
    for (std::size_t i = 0; i < ws.input_tuples(); ++i) {
      const auto xs = ws.decode_inputs(i);
      bool others_at_zero = true;
      for (std::size_t k = 0; k < n && others_at_zero; ++k)
        if (std::find(subset.begin(), subset.end(), k) == subset.end() && xs[k] != 0) others_at_zero = false;
      if (!others_at_zero) continue;
      std::vector<int> sub_x(m);
      for (std::size_t k = 0; k < m; ++k) sub_x[k] = xs[subset[k]];
      const std::size_t bi = bs.encode_inputs(sub_x);
      for (std::size_t o = 0; o < ws.output_tuples(); ++o) {
        const auto as = ws.decode_outputs(o);
        std::vector<int> sub_a(m);
        for (std::size_t k = 0; k < m; ++k) sub_a[k] = as[subset[k]];
        const double c = base.coefficient(bi, bs.encode_outputs(sub_a));
        if (c != 0.0) wired.add_term(xs, as, c);
      }
    }
  }
  return finish(std::move(wired), std::nullopt, base, n, std::move(base_name));
}

MonogamyRelation wire_m_of_n(const CorrelatorFunctional& base, std::size_t n, std::string base_name) {
  const Scenario ws = wired_scenario(base.scenario(), n);
  const std::size_t m = base.scenario().parties();
  CorrelatorFunctional wired(ws);
  for (const auto& subset : subsets(n, m)) {
    for (const auto& t : base.terms()) {
      std::vector<int> xs(n, CorrelatorFunctional::kAbsent);
      for (std::size_t k = 0; k < m; ++k) xs[subset[k]] = t.inputs[k];
      wired.add_term(std::move(xs), t.coeff);
    }
  }
  auto prob = to_probability_form(wired);
  return finish(std::move(prob), std::move(wired), to_probability_form(base), n, std::move(base_name));
}

MonogamyRelation wire_pairwise(const BellFunctional& base, std::size_t n, std::string base_name) {
  if (base.scenario().parties() != 2) throw ConfigError("wire_pairwise: base must be bipartite");
  if (n < 2) throw ConfigError("wire_pairwise: n must be >= 2");
  return wire_m_of_n(base, n, std::move(base_name));
}

MonogamyRelation wire_pairwise(const CorrelatorFunctional& base, std::size_t n, std::string base_name) {
  if (base.scenario().parties() != 2) throw ConfigError("wire_pairwise: base must be bipartite");
  if (n < 2) throw ConfigError("wire_pairwise: n must be >= 2");
  return wire_m_of_n(base, n, std::move(base_name));
}

CorrelatorFunctional chsh() {
  CorrelatorFunctional f(Scenario::binary(2, 2));
  f.add_term({0, 0}, 1.0);
  f.add_term({0, 1}, 1.0);
  f.add_term({1, 0}, 1.0);
  f.add_term({1, 1}, -1.0);
  f.declared_bound = 2.0;
  return f;
}

CorrelatorFunctional tripartite_wired_chsh(const std::array<double, 4>& signs) {
  CorrelatorFunctional f(Scenario::binary(3, 3));
  // Block order: C, B, A holding input 2; within a block the remaining pair
  // runs over (0,0), (0,1), (1,0), (1,1).
  for (int holder : {2, 1, 0}) {
    for (int p = 0; p < 4; ++p) {
      std::vector<int> xs(3);
      int slot = 0;
      for (int k = 0; k < 3; ++k) xs[k] = k == holder ? 2 : (slot++ == 0 ? p / 2 : p % 2);
      f.add_term(std::move(xs), signs[static_cast<std::size_t>(p)]);
    }
  }
  f.declared_bound = 6.0;
  return f;
}

MonogamyReport verify_monogamy(const MonogamyRelation& r) {
  MonogamyReport rep;
  rep.classical = classical_bound(r.functional).value;
  rep.no_signaling = no_signaling_bound(r.functional).value;
  rep.bound = r.bound;
  rep.holds = rep.no_signaling <= r.bound + 1e-8;
  return rep;
}

Json to_json(const MonogamyRelation& r) {
  Json j = r.correlator_form ? to_json(*r.correlator_form) : to_json(r.functional);
  j["bound"] = r.bound;
  j["provenance"] = {{"base", r.provenance.base},
                     {"n", r.provenance.n},
                     {"m", r.provenance.m},
                     {"embedding", r.provenance.embedding}};
  return j;
}

MonogamyRelation monogamy_from_json(const Json& j) {
  auto doc = functional_from_json(j);
  MonogamyRelation r{std::move(doc.probability), std::move(doc.correlator), 0.0, {}};
  try {
    r.bound = j.at("bound").get<double>();
    const Json& p = j.at("provenance");
    r.provenance = {p.at("base").get<std::string>(), p.at("n").get<std::size_t>(), p.at("m").get<std::size_t>(),
                    p.at("embedding").get<std::string>()};
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("monogamy relation: ") + e.what());
  }
  return r;
}

}  // namespace monobell
