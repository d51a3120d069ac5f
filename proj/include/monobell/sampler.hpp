#pragma once

// Monte Carlo trials of the swap protocol, coincidence tallies and the
// ratio estimator for tripartite correlators.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "monobell/bell_core.hpp"
#include "monobell/correlator_table.hpp"
#include "monobell/protocol.hpp"

namespace monobell {

struct TrialRecord {
  int case_index = 0;  // 0: A&B share the pair, 1: B&C, 2: A&C
  Triple inputs{};
  std::array<int, 3> outcomes{};  // +1 / -1

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Deterministic in (spec, n, seed); trial i draws from CounterRng(seed, i).
/// `threads` only changes how the work is split.
std::vector<TrialRecord> sample_trials(const ProtocolSpec& spec, std::int64_t n, std::uint64_t seed,
                                       unsigned threads = 1);

struct CountCell {
  std::array<std::int64_t, 4> n{};  // ++, +-, -+, -- of the quantum pair, lower party first
  std::int64_t total() const { return n[0] + n[1] + n[2] + n[3]; }
  friend bool operator==(const CountCell&, const CountCell&) = default;
};

struct CountsTable {
  std::array<std::array<CountCell, 4>, 3> cells{};       // [case][2 * first input + second input]
  std::array<std::array<std::int64_t, 2>, 3> classical{};  // [case][+, -] of the holder's bit
  std::int64_t trials = 0;

  CountCell& cell(const Triple& inputs);
  const CountCell& cell(const Triple& inputs) const;

  CountsTable& operator+=(const CountsTable& other);
  friend bool operator==(const CountsTable&, const CountsTable&) = default;
};

/// Throws ConfigError on a record whose inputs disagree with its case.
CountsTable accumulate_counts(const std::vector<TrialRecord>& trials);

/// Samples and tallies in one pass without storing trials; bit-identical to
/// accumulate_counts(sample_trials(...)) for any thread count.
CountsTable simulate_counts(const ProtocolSpec& spec, std::int64_t n, std::uint64_t seed, unsigned threads = 1);

/// Ratio estimator with first-order Poisson error propagation. Cells with no
/// events produce entries marked invalid.
CorrelatorTable estimate_correlators(const CountsTable& counts);

struct BellEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

BellEstimate estimate_bell_value(const CorrelatorTable& table, const CorrelatorFunctional& f);

/// Compares a Bell value recomputed from a correlator table with a value
/// quoted alongside it.
struct BellAudit {
  BellEstimate recomputed;
  double quoted = 0.0;
  double deviation_sigmas = 0.0;  // |quoted - recomputed| / stderr; inf if stderr is 0
  bool discrepant = false;        // deviation above the threshold
};

BellAudit audit_bell_value(const CorrelatorTable& table, const CorrelatorFunctional& f, double quoted,
                           double threshold_sigmas = 4.0);

/// Hoeffding tail exp(-2 N (w_obs - w_c)^2) on the game-win fraction, with
/// N = n_per_term * (number of terms). 1 when the observed win rate does not
/// exceed the classical one.
double p_value(const CorrelatorFunctional& f, double observed, std::int64_t n_per_term, double classical_bound);

void write_counts_csv(std::ostream& os, const CountsTable& counts);
void write_correlators_csv(std::ostream& os, const CorrelatorTable& table);

}  // namespace monobell
