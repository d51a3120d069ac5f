#include <cmath>

#include "doctest.h"
#include "monobell/bell_core.hpp"
#include "monobell/errors.hpp"
#include "monobell/monogamy.hpp"
#include "oracles.hpp"

using namespace monobell;

namespace {

// PR box: P(a, b | x, y) = 1/2 when a xor b = x and y.
Behavior pr_box() {
  const Scenario sc = Scenario::binary(2, 2);
  std::vector<double> p(sc.input_tuples() * sc.output_tuples(), 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) p[sc.encode_inputs({x, y}) * 4 + sc.encode_outputs({a, b})] = 0.5;
  return Behavior(sc, p);
}

}  // namespace

TEST_CASE("scenario encoding round trips with party 0 most significant") {
  const Scenario sc({3, 2, 3}, {2, 3, 2});
  CHECK(sc.input_tuples() == 18);
  CHECK(sc.output_tuples() == 12);
  CHECK(sc.encode_inputs({0, 0, 1}) == 1);
  CHECK(sc.encode_inputs({1, 0, 0}) == 6);
  for (std::size_t i = 0; i < sc.input_tuples(); ++i) CHECK(sc.encode_inputs(sc.decode_inputs(i)) == i);
  for (std::size_t o = 0; o < sc.output_tuples(); ++o) CHECK(sc.encode_outputs(sc.decode_outputs(o)) == o);
  CHECK_THROWS_AS(sc.encode_inputs({3, 0, 0}), ConfigError);
  CHECK_FALSE(sc.is_binary());
}

TEST_CASE("behavior validation") {
  const Scenario sc = Scenario::binary(2, 2);
  std::vector<double> p(16, 0.25);
  CHECK_NOTHROW(Behavior(sc, p));
  p[0] = 0.5;
  p[1] = 0.0;  // still normalized, but Alice's marginal now depends on y
  CHECK_THROWS(Behavior(sc, p));
  CHECK(Behavior::unchecked(sc, p).signaling_violation() > 0.1);
  p[1] = -0.25;
  CHECK_THROWS(Behavior(sc, p));
  CHECK(Behavior::uniform(sc).signaling_violation() == 0.0);
}

TEST_CASE("CHSH values on reference behaviors") {
  const CorrelatorFunctional f = chsh();
  CHECK(evaluate(f, pr_box()) == doctest::Approx(4.0));
  CHECK(evaluate(to_probability_form(f), pr_box()) == doctest::Approx(4.0));
  CHECK(evaluate(f, Behavior::uniform(Scenario::binary(2, 2))) == doctest::Approx(0.0));
  CHECK(pr_box().correlator({1, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("CHSH bounds") {
  const BellFunctional f = to_probability_form(chsh());
  const auto cb = classical_bound(f);
  CHECK(cb.value == 2.0);
  CHECK(evaluate(f, cb.witness.behavior(f.scenario())) == doctest::Approx(2.0));
  const auto ns = no_signaling_bound(f);
  CHECK(ns.value == doctest::Approx(4.0).epsilon(1e-12));
  const Behavior opt(f.scenario(), ns.optimal_behavior);
  CHECK(evaluate(f, opt) == doctest::Approx(4.0));
}

TEST_CASE("classical bound agrees with an independent enumeration") {
  const std::array<std::array<double, 4>, 3> layouts{{{1, 1, 1, -1}, {1, -1, 1, 1}, {-1, -1, -1, 1}}};
  for (const auto& signs : layouts) {
    const auto f = tripartite_wired_chsh(signs);
    CHECK(classical_bound(to_probability_form(f)).value ==
          doctest::Approx(oracle::classical_max(oracle::wired_terms(signs), 3, 3)));
  }
}

TEST_CASE("empty functional has every bound zero") {
  const BellFunctional f(Scenario::binary(2, 2));
  CHECK(classical_bound(f).value == 0.0);
  CHECK(no_signaling_bound(f).value == doctest::Approx(0.0));
}

TEST_CASE("guards") {
  // 2^(6 * 5) strategies.
  const BellFunctional big(Scenario::binary(6, 5));
  CHECK_THROWS_AS(classical_bound(big), GuardExceeded);
  CHECK_THROWS_AS(no_signaling_bound(big), GuardExceeded);
}

TEST_CASE("quantum behavior of the Tsirelson strategy") {
  const double r = 1 / std::sqrt(2.0);
  const std::array<Complex, 4> phi{r, 0, 0, r};
  const auto z = pauli::z(), x = pauli::x();
  QuantumStrategy s{DensityMatrix::pure(phi),
                    {2, 2},
                    {{Observable(z), Observable(x)},
                     {Observable((z + x) * Complex(r)), Observable((z - x) * Complex(r))}}};
  const Behavior p = quantum_behavior(s);
  CHECK(p.signaling_violation() < 1e-12);
  CHECK(evaluate(chsh(), p) == doctest::Approx(2 * std::sqrt(2.0)));
  const auto op = bell_operator(chsh(), s.observables);
  CHECK(hermitian_eig(op).values.back() == doctest::Approx(2 * std::sqrt(2.0)));
}

TEST_CASE("correlator functional bookkeeping") {
  CorrelatorFunctional f(Scenario::binary(3, 2));
  f.add_term({0, 1, CorrelatorFunctional::kAbsent}, 1.0);
  f.add_term({0, 1, CorrelatorFunctional::kAbsent}, 0.5);
  CHECK(f.terms().size() == 1);
  CHECK(f.coefficient({0, 1, -1}) == 1.5);
  CHECK(f.coefficient({1, 1, -1}) == 0.0);
  CHECK_THROWS(CorrelatorFunctional(Scenario({2, 2}, {3, 2})));
}

TEST_CASE("game win probability") {
  const auto f = chsh();
  CHECK(game_win_probability(f, 2.0) == doctest::Approx(0.75));
  CHECK(game_win_probability(f, 2 * std::sqrt(2.0)) == doctest::Approx(0.5 + std::sqrt(2.0) / 4));
  CorrelatorFunctional g(Scenario::binary(2, 2));
  g.add_term({0, 0}, 2.0);
  CHECK_THROWS(game_win_probability(g, 1.0));
}
