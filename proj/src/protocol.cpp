#include "monobell/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "monobell/monogamy.hpp"
#include "monobell/rng.hpp"

namespace monobell {

namespace {

constexpr std::array<std::size_t, 3> kQubits{2, 2, 2};
constexpr const char* kPartyNames[3] = {"A", "B", "C"};

// The two parties sharing the pair when `holder` has input 2, ascending.
std::array<std::size_t, 2> pair_parties(std::size_t holder) {
  switch (holder) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

void check_measurements(const ProtocolMeasurements& m) {
  if (m.size() != 3) throw ConfigError("protocol: measurements for exactly 3 parties required");
  for (const auto& party : m) {
    if (party.size() != 2) throw ConfigError("protocol: two measurements (inputs 0, 1) per party required");
    for (const auto& o : party)
      if (o.dim() != 2) throw ConfigError("protocol: measurements must be single-qubit");
  }
}

void check_protocol_functional(const CorrelatorFunctional& f) {
  const Scenario& sc = f.scenario();
  if (sc.parties() != 3 || sc.inputs != std::vector<int>{3, 3, 3})
    throw ConfigError("protocol: functional must have 3 parties with 3 inputs each");
  for (const auto& t : f.terms()) {
    Triple xs{t.inputs[0], t.inputs[1], t.inputs[2]};
    for (int x : xs)
      if (x == CorrelatorFunctional::kAbsent) throw ConfigError("protocol: functional term with an absent party");
    setting_two_holder(xs);
  }
}

Triple as_triple(const std::vector<int>& v) { return {v[0], v[1], v[2]}; }

// Reduced state of the pair that shares the source in each holder's case.
std::array<ComplexMatrix, 3> pair_states(const ProtocolSpec& spec) {
  std::array<ComplexMatrix, 3> out;
  for (std::size_t h = 0; h < 3; ++h) {
    Triple xs{0, 0, 0};
    xs[h] = 2;
    const auto keep = pair_parties(h);
    out[h] = partial_trace(dispatch_state(spec, xs).matrix(), keep, kQubits);
  }
  return out;
}

double pair_expectation(const ComplexMatrix& sigma, const ComplexMatrix& op_low, const ComplexMatrix& op_high) {
  const ComplexMatrix prod = kron(op_low, op_high) * sigma;
  return prod.trace().real();
}

struct Bloch {
  double z = 1.0, x = 0.0, y = 0.0;
  ComplexMatrix matrix() const {
    return pauli::z() * Complex(z) + pauli::x() * Complex(x) + pauli::y() * Complex(y);
  }
};

class ProtocolSeesaw {
 public:
  ProtocolSeesaw(const ProtocolSpec& spec, const CorrelatorFunctional& f) : sigma_(pair_states(spec)) {
    for (const auto& t : f.terms()) {
      const Triple xs = as_triple(t.inputs);
      const std::size_t h = setting_two_holder(xs);
      const auto pp = pair_parties(h);
      terms_.push_back({h, pp, {static_cast<std::size_t>(xs[pp[0]]), static_cast<std::size_t>(xs[pp[1]])}, t.coeff * spec.classical_bias[h]});
    }
  }

  double objective(const std::array<std::array<Bloch, 2>, 3>& obs) const {
    double v = 0.0;
    for (const auto& t : terms_) {
      v += t.weight * pair_expectation(sigma_[t.holder], obs[t.parties[0]][t.inputs[0]].matrix(),
                                       obs[t.parties[1]][t.inputs[1]].matrix());
    }
    return v;
  }

  double run(std::array<std::array<Bloch, 2>, 3>& obs, const ProtocolOptimizeOptions& opt) const {
    double value = objective(obs);
    for (int it = 0; it < opt.iterations; ++it) {
      for (std::size_t k = 0; k < 3; ++k) {
        for (int x = 0; x < 2; ++x) {
          const auto m = effective(obs, k, x);
          double mz = (m * pauli::z()).trace().real();
          double mx = (m * pauli::x()).trace().real();
          double my = opt.full_bloch ? (m * pauli::y()).trace().real() : 0.0;
          const double norm = std::sqrt(mz * mz + mx * mx + my * my);
          if (norm < 1e-14) continue;
          obs[k][static_cast<std::size_t>(x)] = {mz / norm, mx / norm, my / norm};
        }
      }
      const double next = objective(obs);
      if (next < value - 1e-8) throw std::logic_error("protocol seesaw: objective decreased");
      const double gain = next - value;
      value = next;
      if (gain < opt.tolerance) break;
    }
    return value;
  }

 private:
  struct Term {
    std::size_t holder;
    std::array<std::size_t, 2> parties;
    std::array<std::size_t, 2> inputs;
    double weight;
  };

  // M with value = const + Tr(O_{k,x} M).
  ComplexMatrix effective(const std::array<std::array<Bloch, 2>, 3>& obs, std::size_t k, int x) const {
    ComplexMatrix m(2, 2);
    for (const auto& t : terms_) {
      for (std::size_t slot = 0; slot < 2; ++slot) {
        if (t.parties[slot] != k || t.inputs[slot] != static_cast<std::size_t>(x)) continue;
        const std::size_t other = 1 - slot;
        const ComplexMatrix other_op = obs[t.parties[other]][t.inputs[other]].matrix();
        const ComplexMatrix op = slot == 0 ? kron(pauli::id(), other_op) : kron(other_op, pauli::id());
        const std::array<std::size_t, 1> keep{slot};
        const std::array<std::size_t, 2> dims{2, 2};
        m += partial_trace(op * sigma_[t.holder], keep, dims) * Complex(t.weight);
      }
    }
    return (m + m.adjoint()) * Complex(0.5);
  }

  std::array<ComplexMatrix, 3> sigma_;
  std::vector<Term> terms_;
};

}  // namespace

std::size_t setting_two_holder(const Triple& inputs) {
  std::size_t holder = 3;
  int count = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (inputs[k] < 0 || inputs[k] > 2) throw ConfigError("protocol: inputs must lie in {0, 1, 2}");
    if (inputs[k] == 2) {
      holder = k;
      ++count;
    }
  }
  if (count != 1) throw ConfigError("protocol: exactly one input must equal 2");
  return holder;
}

std::size_t holder_of_case(int case_index) {
  switch (case_index) {
    case 0: return 2;
    case 1: return 0;
    case 2: return 1;
    default: throw ConfigError("protocol: case index must be 0, 1 or 2");
  }
}

int case_of_holder(std::size_t holder) {
  switch (holder) {
    case 0: return 1;
    case 1: return 2;
    case 2: return 0;
    default: throw ConfigError("protocol: holder must be 0, 1 or 2");
  }
}

ProtocolMeasurements default_measurements() {
  const double r = 1.0 / std::numbers::sqrt2;
  ProtocolMeasurements m(3);
  m[0] = {Observable(pauli::z()), Observable(pauli::x())};
  m[1] = {Observable((pauli::z() + pauli::x()) * Complex(r)), Observable((pauli::z() - pauli::x()) * Complex(r))};
  m[2] = {Observable(pauli::z()), Observable(pauli::x())};
  return m;
}

void ProtocolSpec::validate() const {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) throw ConfigError("protocol: theta must lie in (0, pi/2)");
  if (base_state_c.dim() != 2) throw ConfigError("protocol: base_state_c must be a single qubit");
  for (const auto& perm : swap_rules) {
    std::array<bool, 3> seen{};
    for (auto p : perm) {
      if (p > 2 || seen[p]) throw ConfigError("protocol: swap rule is not a permutation of 3 particles");
      seen[p] = true;
    }
  }
  check_measurements(measurements);
  for (double b : classical_bias)
    if (!(b >= -1.0 && b <= 1.0)) throw ConfigError("protocol: classical bias must lie in [-1, 1]");
  double total = 0.0;
  for (double p : case_probs) {
    if (!(p >= 0.0)) throw ConfigError("protocol: case probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("protocol: case probabilities must sum to 1");
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw ConfigError("protocol: visibility must lie in [0, 1]");
}

ProtocolSpec protocol_preset(const std::string& name) {
  ProtocolSpec spec;
  if (name == "paper-default") return spec;
  if (name == "experiment") {
    spec.classical_bias = {0.97, 0.97, 0.97};
    spec.case_probs = {0.33549, 0.33241, 0.33210};
    return spec;
  }
  throw ConfigError("unknown protocol preset '" + name + "'");
}

Json to_json(const ProtocolSpec& spec) {
  Json rules, meas;
  for (std::size_t h = 0; h < 3; ++h) {
    rules[kPartyNames[h]] = spec.swap_rules[h];
    meas[kPartyNames[h]] = {to_json(spec.measurements[h][0].matrix()), to_json(spec.measurements[h][1].matrix())};
  }
  return Json{{"theta", spec.theta},
              {"base_state_c", to_json(spec.base_state_c.matrix())},
              {"swap_rules", rules},
              {"measurements", meas},
              {"classical_bias", spec.classical_bias},
              {"case_probs", spec.case_probs},
              {"visibility", spec.visibility}};
}

ProtocolSpec protocol_from_json(const Json& j) {
  try {
    ProtocolSpec spec = protocol_preset(j.value("preset", std::string("paper-default")));
    if (j.contains("theta")) spec.theta = j["theta"].get<double>();
    if (j.contains("base_state_c")) {
      const Json& c = j["base_state_c"];
      if (c.is_string()) {
        if (c.get<std::string>() != "zero") throw ConfigError("protocol: base_state_c must be \"zero\" or a matrix");
      } else {
        spec.base_state_c = DensityMatrix(matrix_from_json(c));
      }
    }
    if (j.contains("swap_rules"))
      for (std::size_t h = 0; h < 3; ++h)
        if (j["swap_rules"].contains(kPartyNames[h]))
          spec.swap_rules[h] = j["swap_rules"][kPartyNames[h]].get<std::array<std::size_t, 3>>();
    if (j.contains("measurements")) {
      const Json& m = j["measurements"];
      if (m.is_string()) {
        if (m.get<std::string>() != "paper-default") throw ConfigError("protocol: unknown measurement preset");
        spec.measurements = default_measurements();
      } else {
        for (std::size_t h = 0; h < 3; ++h) {
          if (!m.contains(kPartyNames[h])) continue;
          const Json& pm = m[kPartyNames[h]];
          if (pm.size() != 2) throw ConfigError("protocol: two matrices per party required");
          spec.measurements[h] = {Observable(matrix_from_json(pm[0])), Observable(matrix_from_json(pm[1]))};
        }
      }
    }
    if (j.contains("classical_bias")) {
      const Json& b = j["classical_bias"];
      spec.classical_bias = b.is_number() ? std::array<double, 3>{b.get<double>(), b.get<double>(), b.get<double>()}
                                          : b.get<std::array<double, 3>>();
    }
    if (j.contains("case_probs")) spec.case_probs = j["case_probs"].get<std::array<double, 3>>();
    if (j.contains("visibility")) spec.visibility = j["visibility"].get<double>();
    spec.validate();
    return spec;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("protocol: ") + e.what());
  } catch (const LinalgError& e) {
    throw ConfigError(std::string("protocol: ") + e.what());
  }
}

const std::vector<Triple>& protocol_triples() {
  static const std::vector<Triple> triples = [] {
    std::vector<Triple> out;
    const auto f = tripartite_wired_chsh();
    for (const auto& t : f.terms()) out.push_back(as_triple(t.inputs));
    return out;
  }();
  return triples;
}

DensityMatrix epr_state(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) throw ConfigError("epr_state: theta must lie in (0, pi/2)");
  const std::array<Complex, 4> ket{std::cos(theta), 0.0, 0.0, std::sin(theta)};
  return DensityMatrix::pure(ket);
}

DensityMatrix pair_state(const ProtocolSpec& spec) {
  const DensityMatrix pure = epr_state(spec.theta);
  if (spec.visibility == 1.0) return pure;
  return DensityMatrix(pure.matrix() * Complex(spec.visibility) +
                       ComplexMatrix::identity(4) * Complex((1.0 - spec.visibility) / 4.0));
}

DensityMatrix dispatch_state(const ProtocolSpec& spec, const Triple& inputs) {
  const std::size_t holder = setting_two_holder(inputs);
  const ComplexMatrix p = permutation_operator(spec.swap_rules[holder], kQubits);
  const ComplexMatrix rho = kron(pair_state(spec).matrix(), spec.base_state_c.matrix());
  ComplexMatrix out = p * rho * p.adjoint();
  return DensityMatrix((out + out.adjoint()) * Complex(0.5));
}

std::array<double, 4> pair_outcome_distribution(const ProtocolSpec& spec, const Triple& inputs) {
  const std::size_t holder = setting_two_holder(inputs);
  const auto pp = pair_parties(holder);
  for (auto k : pp)
    if (inputs[k] > 1) throw ConfigError("protocol: quantum inputs must be 0 or 1");
  const DensityMatrix sigma = partial_trace(dispatch_state(spec, inputs), pp, kQubits);
  const Observable& lo = spec.measurements[pp[0]][static_cast<std::size_t>(inputs[pp[0]])];
  const Observable& hi = spec.measurements[pp[1]][static_cast<std::size_t>(inputs[pp[1]])];
  std::array<double, 4> probs{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      probs[static_cast<std::size_t>(2 * a + b)] = std::max(0.0, expectation(sigma, kron(lo.projector(a), hi.projector(b))));
  return probs;
}

CorrelatorTable exact_correlators(const ProtocolSpec& spec) { return exact_correlators(spec, spec.measurements); }

CorrelatorTable exact_correlators(const ProtocolSpec& spec, const ProtocolMeasurements& m) {
  check_measurements(m);
  CorrelatorTable table;
  for (const auto& xs : protocol_triples()) {
    const std::size_t h = setting_two_holder(xs);
    std::vector<ComplexMatrix> factors(3, pauli::id());
    for (std::size_t k = 0; k < 3; ++k)
      if (k != h) factors[k] = m[k][static_cast<std::size_t>(xs[k])].matrix();
    const double pair = expectation(dispatch_state(spec, xs), kron(factors));
    table[xs] = {pair * spec.classical_bias[h], 0.0, 0, true};
  }
  return table;
}

double exact_bell_value(const ProtocolSpec& spec, const CorrelatorFunctional& f) {
  return exact_bell_value(spec, f, spec.measurements);
}

double exact_bell_value(const ProtocolSpec& spec, const CorrelatorFunctional& f, const ProtocolMeasurements& m) {
  check_protocol_functional(f);
  const CorrelatorTable table = exact_correlators(spec, m);
  double value = 0.0;
  for (const auto& t : f.terms()) {
    const auto it = table.find(as_triple(t.inputs));
    if (it == table.end()) throw ConfigError("protocol: functional references a triple outside the protocol");
    value += t.coeff * it->second.estimate;
  }
  return value;
}

ProtocolOptimum optimize_protocol_measurements(const ProtocolSpec& spec, const CorrelatorFunctional& f,
                                               const ProtocolOptimizeOptions& options) {
  spec.validate();
  check_protocol_functional(f);
  if (options.restarts < 1) throw ConfigError("optimize: restarts must be >= 1");
  const ProtocolSeesaw engine(spec, f);

  std::array<std::array<Bloch, 2>, 3> best{};
  double best_value = 0.0;
  for (int r = 0; r < options.restarts; ++r) {
    CounterRng rng(options.seed, static_cast<std::uint64_t>(r));
    std::array<std::array<Bloch, 2>, 3> obs{};
    for (auto& party : obs) {
      for (auto& b : party) {
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        if (options.full_bloch) {
          const double cz = 2.0 * rng.uniform() - 1.0;
          const double s = std::sqrt(1.0 - cz * cz);
          b = {cz, s * std::cos(phi), s * std::sin(phi)};
        } else {
          b = {std::cos(phi), std::sin(phi), 0.0};
        }
      }
    }
    const double value = engine.run(obs, options);
    if (r == 0 || value > best_value) {
      best_value = value;
      best = obs;
    }
  }

  ProtocolMeasurements m(3);
  for (std::size_t k = 0; k < 3; ++k)
    for (const auto& b : best[k]) m[k].emplace_back(b.matrix());
  return {best_value, std::move(m)};
}

ScanResult theta_threshold_scan(const ProtocolSpec& spec, const CorrelatorFunctional& f,
                                const std::vector<double>& grid, bool optimized, double bound,
                                const ProtocolOptimizeOptions& options) {
  if (grid.empty()) throw ConfigError("scan: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 1.0)) throw ConfigError("scan: sin(2 theta) values must lie in (0, 1]");
    if (i > 0 && grid[i] <= grid[i - 1]) throw ConfigError("scan: grid must be strictly ascending");
  }
  auto value_at = [&](double s) {
    ProtocolSpec local = spec;
    local.theta = 0.5 * std::asin(s);
    return optimized ? optimize_protocol_measurements(local, f, options).value : exact_bell_value(local, f);
  };

  ScanResult result;
  result.bound = bound;
  std::optional<std::size_t> crossing;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = value_at(grid[i]);
    result.curve.push_back({grid[i], v});
    if (!crossing && v > bound) crossing = i;
  }
  if (!crossing) return result;
  if (*crossing == 0) {
    result.threshold = grid.front();
    return result;
  }
  double lo = grid[*crossing - 1], hi = grid[*crossing];
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (value_at(mid) > bound ? hi : lo) = mid;
  }
  result.threshold = hi;
  result.refined = true;
  return result;
}

double critical_visibility(const ProtocolSpec& spec, const CorrelatorFunctional& f, const ProtocolMeasurements& m,
                           double bound) {
  ProtocolSpec pure = spec, noise = spec;
  pure.visibility = 1.0;
  noise.visibility = 0.0;
  const double v1 = exact_bell_value(pure, f, m);
  const double v0 = exact_bell_value(noise, f, m);
  if (!(v1 > bound)) throw ConfigError("critical_visibility: no violation at visibility 1");
  return (bound - v0) / (v1 - v0);
}

double critical_visibility(const CorrelatorFunctional& f, const std::vector<std::vector<Observable>>& observables,
                           const DensityMatrix& state, double bound) {
  const ComplexMatrix w = bell_operator(f, observables);
  if (w.rows() != state.dim()) throw ConfigError("critical_visibility: state dimension mismatch");
  const double v1 = expectation(state, w);
  const double v0 = expectation(DensityMatrix::maximally_mixed(state.dim()), w);
  if (!(v1 > bound)) throw ConfigError("critical_visibility: no violation at visibility 1");
  return (bound - v0) / (v1 - v0);
}

}  // namespace monobell
