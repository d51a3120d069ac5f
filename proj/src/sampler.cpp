#include "monobell/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "monobell/rng.hpp"

namespace monobell {

namespace {

std::array<std::size_t, 2> pair_of_holder(std::size_t holder) {
  switch (holder) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

std::size_t cell_index(const Triple& inputs, std::size_t holder) {
  const auto pp = pair_of_holder(holder);
  const int lo = inputs[pp[0]], hi = inputs[pp[1]];
  if (lo < 0 || lo > 1 || hi < 0 || hi > 1) throw ConfigError("counts: quantum inputs must be 0 or 1");
  return static_cast<std::size_t>(2 * lo + hi);
}

// Everything a trial needs, precomputed once per spec.
struct TrialModel {
  std::array<double, 3> case_cdf{};
  std::array<std::array<std::array<double, 4>, 4>, 3> outcome_cdf{};  // [case][cell][outcome]
  std::array<double, 3> plus_probability{};                            // [case]

  explicit TrialModel(const ProtocolSpec& spec) {
    spec.validate();
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      acc += spec.case_probs[static_cast<std::size_t>(c)];
      case_cdf[static_cast<std::size_t>(c)] = acc;
      const std::size_t h = holder_of_case(c);
      const auto pp = pair_of_holder(h);
      for (int cell = 0; cell < 4; ++cell) {
        Triple xs{};
        xs[h] = 2;
        xs[pp[0]] = cell / 2;
        xs[pp[1]] = cell % 2;
        const auto probs = pair_outcome_distribution(spec, xs);
        double run = 0.0;
        for (std::size_t o = 0; o < 4; ++o) {
          run += probs[o];
          outcome_cdf[static_cast<std::size_t>(c)][static_cast<std::size_t>(cell)][o] = run;
        }
      }
      plus_probability[static_cast<std::size_t>(c)] = 0.5 * (1.0 + spec.classical_bias[h]);
    }
  }

  TrialRecord draw(std::uint64_t seed, std::uint64_t index) const {
    CounterRng rng(seed, index);
    TrialRecord t;
    const double u_case = rng.uniform() * case_cdf[2];
    t.case_index = 2;
    for (int c = 0; c < 3; ++c) {
      if (u_case < case_cdf[static_cast<std::size_t>(c)]) {
        t.case_index = c;
        break;
      }
    }
    // Skip zero-probability cases that a boundary draw could land on.
    while (t.case_index > 0 && case_cdf[static_cast<std::size_t>(t.case_index)] ==
                                   case_cdf[static_cast<std::size_t>(t.case_index - 1)])
      --t.case_index;
    const std::size_t h = holder_of_case(t.case_index);
    const auto pp = pair_of_holder(h);
    const std::uint64_t bits = rng();
    const int cell = static_cast<int>(bits >> 62);
    t.inputs[h] = 2;
    t.inputs[pp[0]] = cell / 2;
    t.inputs[pp[1]] = cell % 2;

    const auto& cdf = outcome_cdf[static_cast<std::size_t>(t.case_index)][static_cast<std::size_t>(cell)];
    const double u_out = rng.uniform() * cdf[3];
    int outcome = 3;
    for (int o = 0; o < 4; ++o) {
      if (u_out < cdf[static_cast<std::size_t>(o)]) {
        outcome = o;
        break;
      }
    }
    t.outcomes[pp[0]] = outcome / 2 == 0 ? 1 : -1;
    t.outcomes[pp[1]] = outcome % 2 == 0 ? 1 : -1;
    t.outcomes[h] = rng.uniform() < plus_probability[static_cast<std::size_t>(t.case_index)] ? 1 : -1;
    return t;
  }
};

void tally(CountsTable& counts, const TrialRecord& t) {
  const std::size_t h = holder_of_case(t.case_index);
  if (t.inputs[h] != 2) throw ConfigError("counts: record inputs inconsistent with its case");
  for (std::size_t k = 0; k < 3; ++k) {
    if (k == h) continue;
    if (t.inputs[k] != 0 && t.inputs[k] != 1) throw ConfigError("counts: record inputs inconsistent with its case");
  }
  for (int o : t.outcomes)
    if (o != 1 && o != -1) throw ConfigError("counts: outcomes must be +1 or -1");
  const auto pp = pair_of_holder(h);
  const std::size_t outcome = (t.outcomes[pp[0]] == 1 ? 0u : 2u) + (t.outcomes[pp[1]] == 1 ? 0u : 1u);
  const auto c = static_cast<std::size_t>(t.case_index);
  counts.cells[c][cell_index(t.inputs, h)].n[outcome] += 1;
  counts.classical[c][t.outcomes[h] == 1 ? 0 : 1] += 1;
  counts.trials += 1;
}

template <typename Work>
void run_chunks(std::int64_t n, unsigned threads, std::vector<CountsTable>& partial, Work work) {
  threads = std::max(1u, threads);
  partial.assign(threads, CountsTable{});
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::int64_t begin = std::min<std::int64_t>(n, chunk * t);
    const std::int64_t end = std::min<std::int64_t>(n, begin + chunk);
    if (threads == 1) {
      work(begin, end, partial[t]);
    } else {
      pool.emplace_back([&, begin, end, t] { work(begin, end, partial[t]); });
    }
  }
  for (auto& th : pool) th.join();
}

}  // namespace

CountCell& CountsTable::cell(const Triple& inputs) {
  const std::size_t h = setting_two_holder(inputs);
  return cells[static_cast<std::size_t>(case_of_holder(h))][cell_index(inputs, h)];
}

const CountCell& CountsTable::cell(const Triple& inputs) const {
  const std::size_t h = setting_two_holder(inputs);
  return cells[static_cast<std::size_t>(case_of_holder(h))][cell_index(inputs, h)];
}

CountsTable& CountsTable::operator+=(const CountsTable& other) {
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t o = 0; o < 4; ++o) cells[c][k].n[o] += other.cells[c][k].n[o];
    classical[c][0] += other.classical[c][0];
    classical[c][1] += other.classical[c][1];
  }
  trials += other.trials;
  return *this;
}

std::vector<TrialRecord> sample_trials(const ProtocolSpec& spec, std::int64_t n, std::uint64_t seed,
                                       unsigned threads) {
  if (n < 1) throw ConfigError("sample_trials: n must be >= 1");
  const TrialModel model(spec);
  std::vector<TrialRecord> out(static_cast<std::size_t>(n));
  std::vector<CountsTable> unused;
  run_chunks(n, threads, unused, [&](std::int64_t begin, std::int64_t end, CountsTable&) {
    for (std::int64_t i = begin; i < end; ++i)
      out[static_cast<std::size_t>(i)] = model.draw(seed, static_cast<std::uint64_t>(i));
  });
  return out;
}

CountsTable accumulate_counts(const std::vector<TrialRecord>& trials) {
  CountsTable counts;
  for (const auto& t : trials) tally(counts, t);
  return counts;
}

CountsTable simulate_counts(const ProtocolSpec& spec, std::int64_t n, std::uint64_t seed, unsigned threads) {
  if (n < 1) throw ConfigError("simulate_counts: n must be >= 1");
  const TrialModel model(spec);
  std::vector<CountsTable> partial;
  run_chunks(n, threads, partial, [&](std::int64_t begin, std::int64_t end, CountsTable& counts) {
    for (std::int64_t i = begin; i < end; ++i) tally(counts, model.draw(seed, static_cast<std::uint64_t>(i)));
  });
  CountsTable total;
  for (const auto& p : partial) total += p;
  return total;
}

CorrelatorTable estimate_correlators(const CountsTable& counts) {
  CorrelatorTable table;
  for (const auto& xs : protocol_triples()) {
    const std::size_t h = setting_two_holder(xs);
    const auto& cell = counts.cell(xs);
    const auto& cls = counts.classical[static_cast<std::size_t>(case_of_holder(h))];
    const double nq = static_cast<double>(cell.total());
    const double nc = static_cast<double>(cls[0] + cls[1]);
    CorrelatorEstimate e;
    e.n_events = cell.total();
    if (nq <= 0.0 || nc <= 0.0) {
      e.valid = false;
      table[xs] = e;
      continue;
    }
    // Parity +1 for (++), (--); -1 for one minus.
    constexpr std::array<double, 4> parity{1.0, -1.0, -1.0, 1.0};
    double sq = 0.0;
    for (std::size_t o = 0; o < 4; ++o) sq += parity[o] * static_cast<double>(cell.n[o]);
    const double eq = sq / nq;
    const double ec = static_cast<double>(cls[0] - cls[1]) / nc;

    // Delta method, each count Poisson: d(S/N)/dN_o = (parity_o - E)/N.
    double var_q = 0.0;
    for (std::size_t o = 0; o < 4; ++o) var_q += static_cast<double>(cell.n[o]) * std::pow(parity[o] - eq, 2);
    var_q /= nq * nq;
    const double var_c = (static_cast<double>(cls[0]) * std::pow(1.0 - ec, 2) +
                          static_cast<double>(cls[1]) * std::pow(1.0 + ec, 2)) /
                         (nc * nc);
    e.estimate = eq * ec;
    e.std_error = std::sqrt(ec * ec * var_q + eq * eq * var_c);
    table[xs] = e;
  }
  return table;
}

BellEstimate estimate_bell_value(const CorrelatorTable& table, const CorrelatorFunctional& f) {
  BellEstimate out;
  double var = 0.0;
  for (const auto& t : f.terms()) {
    if (t.inputs.size() != 3) throw ConfigError("estimate_bell_value: tripartite functional required");
    const Triple xs{t.inputs[0], t.inputs[1], t.inputs[2]};
    const auto it = table.find(xs);
    if (it == table.end()) throw ConfigError("estimate_bell_value: table is missing a functional triple");
    if (!it->second.valid) throw ConfigError("estimate_bell_value: table entry has no events");
    out.value += t.coeff * it->second.estimate;
    var += t.coeff * t.coeff * it->second.std_error * it->second.std_error;
  }
  out.std_error = std::sqrt(var);
  return out;
}

BellAudit audit_bell_value(const CorrelatorTable& table, const CorrelatorFunctional& f, double quoted,
                           double threshold_sigmas) {
  BellAudit a;
  a.recomputed = estimate_bell_value(table, f);
  a.quoted = quoted;
  const double gap = std::abs(quoted - a.recomputed.value);
  a.deviation_sigmas = a.recomputed.std_error > 0.0 ? gap / a.recomputed.std_error
                                                    : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  a.discrepant = a.deviation_sigmas > threshold_sigmas;
  return a;
}

double p_value(const CorrelatorFunctional& f, double observed, std::int64_t n_per_term, double classical_bound) {
  if (!std::isfinite(observed)) throw ConfigError("p_value: observed value must be finite");
  if (n_per_term < 1) throw ConfigError("p_value: n_per_term must be >= 1");
  const double w_obs = game_win_probability(f, observed);
  const double w_c = game_win_probability(f, classical_bound);
  if (w_obs <= w_c) return 1.0;
  const double n_total = static_cast<double>(n_per_term) * static_cast<double>(f.terms().size());
  const double gap = w_obs - w_c;
  return std::max(std::exp(-2.0 * n_total * gap * gap), std::numeric_limits<double>::denorm_min());
}

void write_counts_csv(std::ostream& os, const CountsTable& counts) {
  os << "case,x,y,z,n_pp,n_pm,n_mp,n_mm,nhat_p,nhat_m\n";
  for (int c = 0; c < 3; ++c) {
    const std::size_t h = holder_of_case(c);
    const auto pp = pair_of_holder(h);
    for (int cell = 0; cell < 4; ++cell) {
      Triple xs{};
      xs[h] = 2;
      xs[pp[0]] = cell / 2;
      xs[pp[1]] = cell % 2;
      const auto& n = counts.cell(xs).n;
      const auto& cls = counts.classical[static_cast<std::size_t>(c)];
      os << c << ',' << xs[0] << ',' << xs[1] << ',' << xs[2] << ',' << n[0] << ',' << n[1] << ',' << n[2] << ','
         << n[3] << ',' << cls[0] << ',' << cls[1] << '\n';
    }
  }
}

void write_correlators_csv(std::ostream& os, const CorrelatorTable& table) {
  os << "x,y,z,estimate,stderr,n_events\n";
  char buf[64];
  for (const auto& xs : protocol_triples()) {
    const auto it = table.find(xs);
    if (it == table.end()) continue;
    os << xs[0] << ',' << xs[1] << ',' << xs[2] << ',';
    if (it->second.valid) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g", it->second.estimate, it->second.std_error);
      os << buf;
    } else {
      os << "nan,nan";
    }
    os << ',' << it->second.n_events << '\n';
  }
}

}  // namespace monobell
