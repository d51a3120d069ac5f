#include "monobell/seesaw.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "monobell/rng.hpp"

namespace monobell {

namespace {

struct Term {
  std::vector<int> inputs;
  std::vector<int> outputs;
  double coeff;
};

class Optimizer {
 public:
  Optimizer(const BellFunctional& f, std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    const Scenario& sc = f.scenario();
    for (std::size_t i = 0; i < sc.input_tuples(); ++i)
      for (std::size_t o = 0; o < sc.output_tuples(); ++o)
        if (const double c = f.coefficient(i, o); c != 0.0)
          terms_.push_back({sc.decode_inputs(i), sc.decode_outputs(o), c});
    total_dim_ = 1;
    for (auto d : dims_) total_dim_ *= d;
  }

  // Runs one restart in place; returns the final objective.
  double run(std::vector<std::vector<ComplexMatrix>>& obs, std::vector<Complex>& psi, const SeesawOptions& opt,
             std::vector<double>& trace) {
    double value = update_state(obs, psi);
    trace.assign(1, value);
    for (int it = 0; it < opt.iterations; ++it) {
      for (std::size_t k = 0; k < dims_.size(); ++k) {
        for (std::size_t x = 0; x < obs[k].size(); ++x) obs[k][x] = sign_operator(effective_operator(obs, psi, k, x));
      }
      const double after_parties = objective(obs, psi);
      const double next = update_state(obs, psi);
      if (after_parties < value - 1e-8 || next < after_parties - 1e-8)
        throw std::logic_error("seesaw: objective decreased");
      trace.push_back(next);
      const double gain = next - value;
      value = next;
      if (gain < opt.tolerance) break;
    }
    return value;
  }

 private:
  ComplexMatrix projector(const std::vector<std::vector<ComplexMatrix>>& obs, std::size_t k, int x, int a) const {
    const double sign = a == 0 ? 1.0 : -1.0;
    return (ComplexMatrix::identity(dims_[k]) + obs[k][static_cast<std::size_t>(x)] * Complex(sign)) *
           Complex(0.5);
  }

  ComplexMatrix bell_operator(const std::vector<std::vector<ComplexMatrix>>& obs) const {
    ComplexMatrix w(total_dim_, total_dim_);
    std::vector<ComplexMatrix> factors(dims_.size());
    for (const auto& t : terms_) {
      for (std::size_t k = 0; k < dims_.size(); ++k) factors[k] = projector(obs, k, t.inputs[k], t.outputs[k]);
      w += kron(factors) * Complex(t.coeff);
    }
    return w;
  }

  double update_state(const std::vector<std::vector<ComplexMatrix>>& obs, std::vector<Complex>& psi) const {
    const auto eig = hermitian_eig(bell_operator(obs));
    psi = eig.vectors.column(total_dim_ - 1);
    return eig.values.back();
  }

  double objective(const std::vector<std::vector<ComplexMatrix>>& obs, const std::vector<Complex>& psi) const {
    const auto w_psi = bell_operator(obs) * std::span<const Complex>(psi);
    Complex v = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) v += std::conj(psi[i]) * w_psi[i];
    return v.real();
  }

  // M with value = const + Tr(O_{k,x} M) for fixed state and other parties.
  ComplexMatrix effective_operator(const std::vector<std::vector<ComplexMatrix>>& obs, const std::vector<Complex>& psi,
                                   std::size_t k, std::size_t x) const {
    ComplexMatrix q(total_dim_, total_dim_);
    std::vector<ComplexMatrix> factors(dims_.size());
    for (const auto& t : terms_) {
      if (static_cast<std::size_t>(t.inputs[k]) != x) continue;
      for (std::size_t j = 0; j < dims_.size(); ++j)
        factors[j] = j == k ? ComplexMatrix::identity(dims_[j]) : projector(obs, j, t.inputs[j], t.outputs[j]);
      q += kron(factors) * Complex(0.5 * t.coeff * (t.outputs[k] == 0 ? 1.0 : -1.0));
    }
    const ComplexMatrix rho = ComplexMatrix::outer(psi);
    const std::array<std::size_t, 1> keep{k};
    ComplexMatrix m = partial_trace(q * rho, keep, dims_);
    return (m + m.adjoint()) * Complex(0.5);
  }

  std::vector<std::size_t> dims_;
  std::size_t total_dim_ = 1;
  std::vector<Term> terms_;
};

ComplexMatrix random_observable(std::size_t dim, CounterRng& rng) {
  if (dim == 2) {
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    return pauli::z() * Complex(std::cos(phi)) + pauli::x() * Complex(std::sin(phi));
  }
  // Sign of a random real symmetric matrix.
  ComplexMatrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = 2.0 * rng.uniform() - 1.0;
  return sign_operator(g);
}

}  // namespace

SeesawResult seesaw(const BellFunctional& f, const std::vector<std::size_t>& local_dims, const SeesawOptions& options) {
  const Scenario& sc = f.scenario();
  if (local_dims.size() != sc.parties()) throw ConfigError("seesaw: one local dimension per party required");
  if (!sc.is_binary()) throw ConfigError("seesaw: two-outcome scenarios only");
  std::size_t total = 1;
  for (auto d : local_dims) {
    if (d < 1) throw ConfigError("seesaw: zero local dimension");
    total *= d;
  }
  if (total > 16) throw GuardExceeded("seesaw: total dimension exceeds 16");
  if (options.restarts < 1) throw ConfigError("seesaw: restarts must be >= 1");

  Optimizer opt(f, local_dims);
  double best_value = 0.0;
  int best_restart = 0;
  std::vector<double> best_trace;
  bool have_best = false;
  std::vector<std::vector<ComplexMatrix>> best_obs;
  std::vector<Complex> best_psi;

  for (int r = 0; r < options.restarts; ++r) {
    CounterRng rng(options.seed, static_cast<std::uint64_t>(r));
    std::vector<std::vector<ComplexMatrix>> obs(sc.parties());
    for (std::size_t k = 0; k < sc.parties(); ++k)
      for (int x = 0; x < sc.inputs[k]; ++x) obs[k].push_back(random_observable(local_dims[k], rng));
    std::vector<Complex> psi;
    std::vector<double> trace;
    const double value = opt.run(obs, psi, options, trace);
    if (!have_best || value > best_value) {
      best_value = value;
      best_restart = r;
      best_trace = std::move(trace);
      best_obs = std::move(obs);
      best_psi = std::move(psi);
      have_best = true;
    }
  }

  std::vector<std::vector<Observable>> observables(sc.parties());
  for (std::size_t k = 0; k < sc.parties(); ++k)
    for (auto& m : best_obs[k]) observables[k].emplace_back(std::move(m));
  return SeesawResult{best_value,
                      QuantumStrategy{DensityMatrix::pure(best_psi), local_dims, std::move(observables)},
                      best_restart, std::move(best_trace)};
}

}  // namespace monobell
