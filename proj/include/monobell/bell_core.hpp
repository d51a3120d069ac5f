#pragma once

// Linear Bell functionals over finite scenarios and their bounds.
//
// Tuples are indexed mixed-radix with party 0 most significant. Outputs are
// coded 0 <-> +1 and 1 <-> -1 whenever a correlator is formed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "monobell/errors.hpp"
#include "monobell/qlinalg.hpp"

namespace monobell {

struct Scenario {
  std::vector<int> inputs;   // per party
  std::vector<int> outputs;  // per party

  Scenario() = default;
  Scenario(std::vector<int> inputs_per_party, std::vector<int> outputs_per_party);
  /// Every party with the same number of inputs and binary outputs.
  static Scenario binary(std::size_t parties, int inputs_per_party);

  std::size_t parties() const { return inputs.size(); }
  std::size_t input_tuples() const;
  std::size_t output_tuples() const;
  bool is_binary() const;

  std::size_t encode_inputs(const std::vector<int>& xs) const;
  std::size_t encode_outputs(const std::vector<int>& as) const;
  std::vector<int> decode_inputs(std::size_t index) const;
  std::vector<int> decode_outputs(std::size_t index) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// sum over (x, a) of alpha(x, a) P(a|x), stored densely.
class BellFunctional {
 public:
  BellFunctional() = default;
  explicit BellFunctional(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  /// Adds to the existing coefficient.
  void add_term(const std::vector<int>& inputs, const std::vector<int>& outputs, double coeff);
  double coefficient(std::size_t input_index, std::size_t output_index) const {
    return coeffs_[input_index * scenario_.output_tuples() + output_index];
  }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t nonzero_terms() const;

  std::optional<double> declared_bound;

 private:
  Scenario scenario_;
  std::vector<double> coeffs_;
};

/// Input -1 marks a party that does not take part in the term.
struct CorrelatorTerm {
  std::vector<int> inputs;
  double coeff = 0.0;
};

class CorrelatorFunctional {
 public:
  static constexpr int kAbsent = -1;

  CorrelatorFunctional() = default;
  /// Requires binary outputs.
  explicit CorrelatorFunctional(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const std::vector<CorrelatorTerm>& terms() const { return terms_; }
  /// Merges with an existing term on the same input tuple.
  void add_term(std::vector<int> inputs, double coeff);
  /// Coefficient of a tuple, 0 when absent.
  double coefficient(const std::vector<int>& inputs) const;

  std::optional<double> declared_bound;

 private:
  Scenario scenario_;
  std::vector<CorrelatorTerm> terms_;
};

class Behavior {
 public:
  static constexpr double kNormalizationTol = 1e-10;
  static constexpr double kNegativityTol = 1e-12;
  static constexpr double kNoSignalingTol = 1e-9;

  /// Validates nonnegativity, normalization and no-signaling.
  Behavior(Scenario scenario, std::vector<double> probabilities);
  /// Skips validation; for signaling tables and LP intermediates.
  static Behavior unchecked(Scenario scenario, std::vector<double> probabilities);
  static Behavior uniform(const Scenario& scenario);

  const Scenario& scenario() const { return scenario_; }
  double probability(std::size_t input_index, std::size_t output_index) const {
    return probs_[input_index * scenario_.output_tuples() + output_index];
  }
  const std::vector<double>& probabilities() const { return probs_; }

  /// Largest deviation between marginals of any party subset complement
  /// across that party's inputs.
  double signaling_violation() const;
  /// <prod_{k present} A_k> for a term whose absent parties are marginalized at input 0.
  double correlator(const std::vector<int>& inputs) const;

 private:
  Behavior() = default;
  Scenario scenario_;
  std::vector<double> probs_;
};

struct DeterministicStrategy {
  std::vector<std::vector<int>> response;  // [party][input] -> output

  Behavior behavior(const Scenario& scenario) const;
};

struct QuantumStrategy {
  DensityMatrix state;
  std::vector<std::size_t> local_dims;
  std::vector<std::vector<Observable>> observables;  // [party][input]
};

double evaluate(const BellFunctional& f, const Behavior& p);
double evaluate(const CorrelatorFunctional& f, const Behavior& p);

Behavior quantum_behavior(const QuantumStrategy& s);

struct ClassicalBound {
  double value = 0.0;
  DeterministicStrategy witness;
};

inline constexpr std::uint64_t kMaxDeterministicStrategies = 10'000'000;
inline constexpr std::size_t kMaxLpVariables = 5000;

/// Exhaustive search over deterministic strategies; first maximum wins.
ClassicalBound classical_bound(const BellFunctional& f);

struct NoSignalingBound {
  double value = 0.0;
  std::vector<double> optimal_behavior;  // same layout as Behavior
};

/// LP over the no-signaling polytope.
NoSignalingBound no_signaling_bound(const BellFunctional& f);

/// sum coeff * (kron of the term's observables); absent parties contribute identity.
ComplexMatrix bell_operator(const CorrelatorFunctional& f,
                            const std::vector<std::vector<Observable>>& observables);

BellFunctional to_probability_form(const CorrelatorFunctional& f);

/// 1/2 + value / (2 T) for T unit-coefficient terms.
double game_win_probability(const CorrelatorFunctional& f, double value);

}  // namespace monobell
