#include "doctest.h"
#include "monobell/errors.hpp"
#include "monobell/functional_io.hpp"
#include "monobell/monogamy.hpp"

using namespace monobell;

TEST_CASE("correlator functional JSON round trip") {
  const auto f = tripartite_wired_chsh();
  const auto doc = functional_from_json(to_json(f));
  REQUIRE(doc.correlator);
  CHECK(doc.correlator->terms().size() == 12);
  CHECK(doc.correlator->coefficient({1, 1, 2}) == -1.0);
  CHECK(doc.probability.coefficients() == to_probability_form(f).coefficients());
  CHECK(doc.probability.declared_bound == 6.0);
}

TEST_CASE("null inputs mark absent parties") {
  const Json j = Json::parse(R"({"scenario": {"parties": 3, "inputs": 2, "outputs": 2},
                                  "correlator_terms": [{"inputs": [0, null, 1], "coeff": 1}]})");
  const auto f = correlator_from_json(j);
  CHECK(f.coefficient({0, CorrelatorFunctional::kAbsent, 1}) == 1.0);
  CHECK(to_json(f)["correlator_terms"][0]["inputs"][1].is_null());
}

TEST_CASE("probability-form round trip") {
  BellFunctional f(Scenario({2, 3}, {3, 2}));
  f.add_term({1, 2}, {2, 0}, 0.75);
  f.add_term({0, 0}, {0, 1}, -1.0);
  const auto doc = functional_from_json(to_json(f));
  CHECK_FALSE(doc.correlator);
  CHECK(doc.probability.coefficients() == f.coefficients());
  CHECK(doc.probability.scenario() == f.scenario());
}

TEST_CASE("malformed documents raise ConfigError") {
  CHECK_THROWS_AS(functional_from_json(Json::parse(R"({"scenario": {"parties": 2}})")), ConfigError);
  CHECK_THROWS_AS(functional_from_json(Json::parse(R"({"scenario": {"parties": 2, "inputs": [2], "outputs": 2},
                                                       "correlator_terms": []})")),
                  ConfigError);
  CHECK_THROWS_AS(functional_from_json(Json::parse(R"({"scenario": {"parties": 2, "inputs": 2, "outputs": 2},
                                                       "correlator_terms": [{"inputs": [0, 5], "coeff": 1}]})")),
                  ConfigError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("matrix JSON round trip") {
  const auto m = pauli::y() * Complex(0.5) + pauli::id() * Complex(0.5);
  CHECK(matrix_from_json(to_json(m)).max_abs_diff(m) == 0.0);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"re": [[1, 0], [0]]})")), ConfigError);
}
