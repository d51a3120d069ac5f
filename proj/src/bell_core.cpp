#include "monobell/bell_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "monobell/simplex.hpp"

namespace monobell {

namespace {

std::size_t mixed_product(const std::vector<int>& radices) {
  std::size_t p = 1;
  for (int r : radices) p *= static_cast<std::size_t>(r);
  return p;
}

std::size_t encode(const std::vector<int>& digits, const std::vector<int>& radices, const char* what) {
  if (digits.size() != radices.size()) throw ConfigError(std::string(what) + ": tuple length != party count");
  std::size_t index = 0;
  for (std::size_t k = 0; k < radices.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= radices[k]) throw ConfigError(std::string(what) + ": value out of range");
    index = index * static_cast<std::size_t>(radices[k]) + static_cast<std::size_t>(digits[k]);
  }
  return index;
}

std::vector<int> decode(std::size_t index, const std::vector<int>& radices) {
  std::vector<int> digits(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    digits[k] = static_cast<int>(index % static_cast<std::size_t>(radices[k]));
    index /= static_cast<std::size_t>(radices[k]);
  }
  return digits;
}

int parity_sign(const std::vector<int>& outputs, const std::vector<int>& inputs) {
  int sign = 1;
  for (std::size_t k = 0; k < outputs.size(); ++k)
    if (inputs[k] != CorrelatorFunctional::kAbsent && outputs[k] == 1) sign = -sign;
  return sign;
}

// Absent parties are evaluated at input 0.
std::vector<int> concrete_inputs(const std::vector<int>& inputs) {
  std::vector<int> out = inputs;
  for (int& x : out)
    if (x == CorrelatorFunctional::kAbsent) x = 0;
  return out;
}

}  // namespace

Scenario::Scenario(std::vector<int> inputs_per_party, std::vector<int> outputs_per_party)
    : inputs(std::move(inputs_per_party)), outputs(std::move(outputs_per_party)) {
  if (inputs.size() != outputs.size()) throw ConfigError("Scenario: inputs/outputs length mismatch");
  if (inputs.empty()) throw ConfigError("Scenario: no parties");
  for (std::size_t k = 0; k < inputs.size(); ++k)
    if (inputs[k] < 1 || outputs[k] < 1) throw ConfigError("Scenario: counts must be >= 1");
}

Scenario Scenario::binary(std::size_t parties, int inputs_per_party) {
  return Scenario(std::vector<int>(parties, inputs_per_party), std::vector<int>(parties, 2));
}

std::size_t Scenario::input_tuples() const { return mixed_product(inputs); }
std::size_t Scenario::output_tuples() const { return mixed_product(outputs); }
bool Scenario::is_binary() const {
  return std::all_of(outputs.begin(), outputs.end(), [](int o) { return o == 2; });
}

std::size_t Scenario::encode_inputs(const std::vector<int>& xs) const { return encode(xs, inputs, "inputs"); }
std::size_t Scenario::encode_outputs(const std::vector<int>& as) const { return encode(as, outputs, "outputs"); }
std::vector<int> Scenario::decode_inputs(std::size_t index) const { return decode(index, inputs); }
std::vector<int> Scenario::decode_outputs(std::size_t index) const { return decode(index, outputs); }

BellFunctional::BellFunctional(Scenario scenario)
    : scenario_(std::move(scenario)), coeffs_(scenario_.input_tuples() * scenario_.output_tuples(), 0.0) {}

void BellFunctional::add_term(const std::vector<int>& inputs, const std::vector<int>& outputs, double coeff) {
  const std::size_t i = scenario_.encode_inputs(inputs);
  const std::size_t o = scenario_.encode_outputs(outputs);
  coeffs_[i * scenario_.output_tuples() + o] += coeff;
}

std::size_t BellFunctional::nonzero_terms() const {
  return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; }));
}

CorrelatorFunctional::CorrelatorFunctional(Scenario scenario) : scenario_(std::move(scenario)) {
  if (!scenario_.is_binary()) throw ConfigError("CorrelatorFunctional: outputs must be binary");
}

void CorrelatorFunctional::add_term(std::vector<int> inputs, double coeff) {
  if (inputs.size() != scenario_.parties()) throw ConfigError("correlator term: tuple length != party count");
  for (std::size_t k = 0; k < inputs.size(); ++k)
    if (inputs[k] != kAbsent && (inputs[k] < 0 || inputs[k] >= scenario_.inputs[k]))
      throw ConfigError("correlator term: input out of range");
  for (auto& t : terms_) {
    if (t.inputs == inputs) {
      t.coeff += coeff;
      return;
    }
  }
  terms_.push_back({std::move(inputs), coeff});
}

double CorrelatorFunctional::coefficient(const std::vector<int>& inputs) const {
  for (const auto& t : terms_)
    if (t.inputs == inputs) return t.coeff;
  return 0.0;
}

Behavior::Behavior(Scenario scenario, std::vector<double> probabilities)
    : scenario_(std::move(scenario)), probs_(std::move(probabilities)) {
  const std::size_t ni = scenario_.input_tuples(), no = scenario_.output_tuples();
  if (probs_.size() != ni * no) throw ConfigError("Behavior: table size mismatch");
  for (std::size_t i = 0; i < ni; ++i) {
    double total = 0.0;
    for (std::size_t o = 0; o < no; ++o) {
      const double p = probability(i, o);
      if (p < -kNegativityTol) throw ConfigError("Behavior: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTol) throw ConfigError("Behavior: not normalized");
  }
  if (signaling_violation() > kNoSignalingTol) throw ConfigError("Behavior: signaling marginals");
}

Behavior Behavior::unchecked(Scenario scenario, std::vector<double> probabilities) {
  Behavior b;
  b.scenario_ = std::move(scenario);
  b.probs_ = std::move(probabilities);
  if (b.probs_.size() != b.scenario_.input_tuples() * b.scenario_.output_tuples())
    throw ConfigError("Behavior: table size mismatch");
  return b;
}

Behavior Behavior::uniform(const Scenario& scenario) {
  const double p = 1.0 / static_cast<double>(scenario.output_tuples());
  return Behavior(scenario, std::vector<double>(scenario.input_tuples() * scenario.output_tuples(), p));
}

double Behavior::signaling_violation() const {
  const std::size_t ni = scenario_.input_tuples(), no = scenario_.output_tuples();
  double worst = 0.0;
  for (std::size_t k = 0; k < scenario_.parties(); ++k) {
    if (scenario_.inputs[k] < 2) continue;
    for (std::size_t i = 0; i < ni; ++i) {
      auto xs = scenario_.decode_inputs(i);
      if (xs[k] == 0) continue;
      auto ref_inputs = xs;
      ref_inputs[k] = 0;
      const std::size_t iref = scenario_.encode_inputs(ref_inputs);
      for (std::size_t o = 0; o < no; ++o) {
        auto as = scenario_.decode_outputs(o);
        if (as[k] != 0) continue;
        double here = 0.0, there = 0.0;
        for (int a = 0; a < scenario_.outputs[k]; ++a) {
          as[k] = a;
          const std::size_t oo = scenario_.encode_outputs(as);
          here += probability(i, oo);
          there += probability(iref, oo);
        }
        worst = std::max(worst, std::abs(here - there));
      }
    }
  }
  return worst;
}

double Behavior::correlator(const std::vector<int>& inputs) const {
  if (!scenario_.is_binary()) throw ConfigError("correlator: outputs must be binary");
  const std::size_t i = scenario_.encode_inputs(concrete_inputs(inputs));
  double sum = 0.0;
  for (std::size_t o = 0; o < scenario_.output_tuples(); ++o)
    sum += parity_sign(scenario_.decode_outputs(o), inputs) * probability(i, o);
  return sum;
}

Behavior DeterministicStrategy::behavior(const Scenario& scenario) const {
  if (response.size() != scenario.parties()) throw ConfigError("DeterministicStrategy: party count mismatch");
  std::vector<double> probs(scenario.input_tuples() * scenario.output_tuples(), 0.0);
  for (std::size_t i = 0; i < scenario.input_tuples(); ++i) {
    const auto xs = scenario.decode_inputs(i);
    std::vector<int> as(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) as[k] = response[k].at(static_cast<std::size_t>(xs[k]));
    probs[i * scenario.output_tuples() + scenario.encode_outputs(as)] = 1.0;
  }
  return Behavior(scenario, std::move(probs));
}

double evaluate(const BellFunctional& f, const Behavior& p) {
  if (!(f.scenario() == p.scenario())) throw ConfigError("evaluate: scenario mismatch");
  double sum = 0.0;
  const auto& c = f.coefficients();
  const auto& q = p.probabilities();
  for (std::size_t k = 0; k < c.size(); ++k) sum += c[k] * q[k];
  return sum;
}

double evaluate(const CorrelatorFunctional& f, const Behavior& p) {
  if (!(f.scenario() == p.scenario())) throw ConfigError("evaluate: scenario mismatch");
  double sum = 0.0;
  for (const auto& t : f.terms()) sum += t.coeff * p.correlator(t.inputs);
  return sum;
}

Behavior quantum_behavior(const QuantumStrategy& s) {
  const std::size_t n = s.local_dims.size();
  if (s.observables.size() != n) throw ConfigError("quantum_behavior: party count mismatch");
  std::size_t total_dim = 1;
  for (auto d : s.local_dims) total_dim *= d;
  if (total_dim != s.state.dim()) throw ConfigError("quantum_behavior: local dims do not match state");

  std::vector<int> inputs(n), outputs(n, 2);
  std::vector<std::vector<std::array<ComplexMatrix, 2>>> projectors(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (s.observables[k].empty()) throw ConfigError("quantum_behavior: party without measurements");
    inputs[k] = static_cast<int>(s.observables[k].size());
    for (const auto& o : s.observables[k]) {
      if (o.dim() != s.local_dims[k]) throw ConfigError("quantum_behavior: observable dimension mismatch");
      projectors[k].push_back({o.projector(0), o.projector(1)});
    }
  }
  Scenario scenario(inputs, outputs);
  std::vector<double> probs(scenario.input_tuples() * scenario.output_tuples());
  std::vector<ComplexMatrix> factors(n);
  for (std::size_t i = 0; i < scenario.input_tuples(); ++i) {
    const auto xs = scenario.decode_inputs(i);
    for (std::size_t o = 0; o < scenario.output_tuples(); ++o) {
      const auto as = scenario.decode_outputs(o);
      for (std::size_t k = 0; k < n; ++k)
        factors[k] = projectors[k][static_cast<std::size_t>(xs[k])][static_cast<std::size_t>(as[k])];
      probs[i * scenario.output_tuples() + o] = expectation(s.state, kron(factors));
    }
  }
  return Behavior(std::move(scenario), std::move(probs));
}

ClassicalBound classical_bound(const BellFunctional& f) {
  const Scenario& sc = f.scenario();
  const std::size_t n = sc.parties();
  // Per-party response functions are mixed-radix numbers: input x -> digit x in base outputs.
  std::vector<std::uint64_t> codes_per_party(n);
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t codes = 1;
    for (int x = 0; x < sc.inputs[k]; ++x) {
      codes *= static_cast<std::uint64_t>(sc.outputs[k]);
      if (codes > kMaxDeterministicStrategies) throw GuardExceeded("classical_bound: too many deterministic strategies");
    }
    codes_per_party[k] = codes;
    total *= codes;
    if (total > kMaxDeterministicStrategies) throw GuardExceeded("classical_bound: too many deterministic strategies");
  }

  auto response_of = [&](std::size_t party, std::uint64_t code) {
    std::vector<int> r(static_cast<std::size_t>(sc.inputs[party]));
    for (auto& v : r) {
      v = static_cast<int>(code % static_cast<std::uint64_t>(sc.outputs[party]));
      code /= static_cast<std::uint64_t>(sc.outputs[party]);
    }
    return r;
  };

  // Precompute the input tuples once.
  const std::size_t ni = sc.input_tuples(), no = sc.output_tuples();
  std::vector<std::vector<int>> input_tuples(ni);
  for (std::size_t i = 0; i < ni; ++i) input_tuples[i] = sc.decode_inputs(i);
  std::vector<std::size_t> out_stride(n);
  {
    std::size_t stride = 1;
    for (std::size_t k = n; k-- > 0;) {
      out_stride[k] = stride;
      stride *= static_cast<std::size_t>(sc.outputs[k]);
    }
  }

  std::vector<std::vector<int>> responses(n);
  std::vector<std::uint64_t> counter(n, 0);
  for (std::size_t k = 0; k < n; ++k) responses[k] = response_of(k, 0);

  ClassicalBound best;
  bool have_best = false;
  const auto& c = f.coefficients();
  for (std::uint64_t s = 0; s < total; ++s) {
    double value = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
      std::size_t o = 0;
      for (std::size_t k = 0; k < n; ++k)
        o += static_cast<std::size_t>(responses[k][static_cast<std::size_t>(input_tuples[i][k])]) * out_stride[k];
      value += c[i * no + o];
    }
    if (!have_best || value > best.value) {
      best.value = value;
      best.witness.response = responses;
      have_best = true;
    }
    // Increment the counter, last party fastest.
    for (std::size_t k = n; k-- > 0;) {
      if (++counter[k] < codes_per_party[k]) {
        responses[k] = response_of(k, counter[k]);
        break;
      }
      counter[k] = 0;
      responses[k] = response_of(k, 0);
    }
  }
  return best;
}

NoSignalingBound no_signaling_bound(const BellFunctional& f) {
  const Scenario& sc = f.scenario();
  const std::size_t ni = sc.input_tuples(), no = sc.output_tuples();
  const std::size_t nv = ni * no;
  if (nv > kMaxLpVariables) throw GuardExceeded("no_signaling_bound: LP has too many variables");

  lp::LinearProgram prog;
  prog.c = f.coefficients();
  auto var = [no](std::size_t i, std::size_t o) { return i * no + o; };

  for (std::size_t i = 0; i < ni; ++i) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t o = 0; o < no; ++o) row[var(i, o)] = 1.0;
    prog.a.push_back(std::move(row));
    prog.b.push_back(1.0);
  }
  // Chain form: the marginal of everyone except party k agrees between
  // inputs x_k and x_k + 1.
  for (std::size_t k = 0; k < sc.parties(); ++k) {
    for (std::size_t i = 0; i < ni; ++i) {
      const auto xs = sc.decode_inputs(i);
      if (xs[k] + 1 >= sc.inputs[k]) continue;
      auto next = xs;
      next[k] += 1;
      const std::size_t inext = sc.encode_inputs(next);
      for (std::size_t o = 0; o < no; ++o) {
        auto as = sc.decode_outputs(o);
        if (as[k] != 0) continue;
        std::vector<double> row(nv, 0.0);
        for (int a = 0; a < sc.outputs[k]; ++a) {
          as[k] = a;
          const std::size_t oo = sc.encode_outputs(as);
          row[var(i, oo)] += 1.0;
          row[var(inext, oo)] -= 1.0;
        }
        prog.a.push_back(std::move(row));
        prog.b.push_back(0.0);
      }
    }
  }

  const auto sol = lp::maximize(prog);
  if (sol.status != lp::Status::kOptimal)
    throw std::logic_error("no_signaling_bound: LP not optimal; constraint construction is broken");
  return {sol.value, sol.x};
}

ComplexMatrix bell_operator(const CorrelatorFunctional& f, const std::vector<std::vector<Observable>>& observables) {
  const Scenario& sc = f.scenario();
  if (observables.size() != sc.parties()) throw ConfigError("bell_operator: party count mismatch");
  std::vector<std::size_t> dims(sc.parties());
  std::size_t total = 1;
  for (std::size_t k = 0; k < sc.parties(); ++k) {
    if (observables[k].size() != static_cast<std::size_t>(sc.inputs[k]))
      throw ConfigError("bell_operator: observable count != inputs");
    dims[k] = observables[k].front().dim();
    for (const auto& o : observables[k])
      if (o.dim() != dims[k]) throw ConfigError("bell_operator: inconsistent local dimension");
    total *= dims[k];
  }
  ComplexMatrix op(total, total);
  std::vector<ComplexMatrix> factors(sc.parties());
  for (const auto& t : f.terms()) {
    for (std::size_t k = 0; k < sc.parties(); ++k)
      factors[k] = t.inputs[k] == CorrelatorFunctional::kAbsent
                       ? ComplexMatrix::identity(dims[k])
                       : observables[k][static_cast<std::size_t>(t.inputs[k])].matrix();
    op += kron(factors) * Complex(t.coeff);
  }
  return op;
}

BellFunctional to_probability_form(const CorrelatorFunctional& f) {
  const Scenario& sc = f.scenario();
  if (!sc.is_binary()) throw ConfigError("to_probability_form: outputs must be binary");
  BellFunctional out(sc);
  for (const auto& t : f.terms()) {
    const auto xs = concrete_inputs(t.inputs);
    for (std::size_t o = 0; o < sc.output_tuples(); ++o) {
      const auto as = sc.decode_outputs(o);
      out.add_term(xs, as, t.coeff * parity_sign(as, t.inputs));
    }
  }
  out.declared_bound = f.declared_bound;
  return out;
}

double game_win_probability(const CorrelatorFunctional& f, double value) {
  if (f.terms().empty()) throw ConfigError("game_win_probability: empty functional");
  for (const auto& t : f.terms())
    if (std::abs(std::abs(t.coeff) - 1.0) > 1e-12) throw ConfigError("game_win_probability: coefficients must be +-1");
  const double terms = static_cast<double>(f.terms().size());
  return 0.5 + value / (2.0 * terms);
}

}  // namespace monobell
