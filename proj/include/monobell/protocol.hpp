#pragma once

// Dynamical swap protocol: a source holding cos(t)|00> + sin(t)|11> on (A, B)
// and a single-qubit state on C permutes the three particles according to
// which party received input 2, so the two remaining parties always share
// the entangled pair. The party holding input 2 answers with a classical
// +-1 bit of mean beta.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "monobell/bell_core.hpp"
#include "monobell/correlator_table.hpp"
#include "monobell/functional_io.hpp"

namespace monobell {

/// [party][input] for inputs 0 and 1 of parties A, B, C.
using ProtocolMeasurements = std::vector<std::vector<Observable>>;

/// Index of the party holding input 2; throws unless exactly one input is 2.
std::size_t setting_two_holder(const Triple& inputs);

/// Case index used by the source's random switch: 0 = (A,B) share the pair,
/// 1 = (B,C), 2 = (A,C). Returns the party that holds input 2 in that case.
std::size_t holder_of_case(int case_index);
int case_of_holder(std::size_t holder);

ProtocolMeasurements default_measurements();

struct ProtocolSpec {
  double theta = 0.7853981633974483;  // pi/4
  DensityMatrix base_state_c = DensityMatrix(pauli::id() * Complex(0.5) + pauli::z() * Complex(0.5));
  /// Indexed by the party holding input 2; particle k is sent to slot perm[k].
  std::array<std::array<std::size_t, 3>, 3> swap_rules{{{2, 1, 0}, {0, 2, 1}, {0, 1, 2}}};
  ProtocolMeasurements measurements = default_measurements();
  std::array<double, 3> classical_bias{1.0, 1.0, 1.0};
  std::array<double, 3> case_probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  /// Werner mixing of the dispatched pair; 1 is the pure state.
  double visibility = 1.0;

  void validate() const;
};

/// Presets: "paper-default" and "experiment".
ProtocolSpec protocol_preset(const std::string& name);

Json to_json(const ProtocolSpec& spec);
ProtocolSpec protocol_from_json(const Json& j);

/// The 12 relevant input triples, grouped by holder C, B, A.
const std::vector<Triple>& protocol_triples();

DensityMatrix epr_state(double theta);
/// visibility * epr_state + (1 - visibility) * I/4.
DensityMatrix pair_state(const ProtocolSpec& spec);
DensityMatrix dispatch_state(const ProtocolSpec& spec, const Triple& inputs);

/// Joint outcome probabilities (++, +-, -+, --) of the two quantum parties,
/// lower party index first.
std::array<double, 4> pair_outcome_distribution(const ProtocolSpec& spec, const Triple& inputs);

/// Exact correlators: pair expectation times the holder's beta.
CorrelatorTable exact_correlators(const ProtocolSpec& spec);
CorrelatorTable exact_correlators(const ProtocolSpec& spec, const ProtocolMeasurements& m);

double exact_bell_value(const ProtocolSpec& spec, const CorrelatorFunctional& f);
double exact_bell_value(const ProtocolSpec& spec, const CorrelatorFunctional& f, const ProtocolMeasurements& m);

struct ProtocolOptimizeOptions {
  std::uint64_t seed = 1;
  int restarts = 20;
  int iterations = 200;
  double tolerance = 1e-10;
  bool full_bloch = false;  // default: observables restricted to the z-x plane
};

struct ProtocolOptimum {
  double value = 0.0;
  ProtocolMeasurements measurements;
};

ProtocolOptimum optimize_protocol_measurements(const ProtocolSpec& spec, const CorrelatorFunctional& f,
                                               const ProtocolOptimizeOptions& options = {});

struct ScanPoint {
  double sin2theta;
  double value;
};

struct ScanResult {
  std::vector<ScanPoint> curve;
  std::optional<double> threshold;  // nullopt: no violation in range
  bool refined = false;             // threshold bisected between two grid points
  double bound = 0.0;
};

/// Smallest sin(2 theta) on the ascending grid whose value exceeds `bound`,
/// refined by bisection to 1e-6.
ScanResult theta_threshold_scan(const ProtocolSpec& spec, const CorrelatorFunctional& f,
                                const std::vector<double>& sin2theta_grid, bool optimized, double bound,
                                const ProtocolOptimizeOptions& options = {});

/// v* with value(v*) = bound when the dispatched pair is Werner-mixed.
double critical_visibility(const ProtocolSpec& spec, const CorrelatorFunctional& f, const ProtocolMeasurements& m,
                           double bound);

/// Same for a static strategy: state -> v state + (1 - v) I/d.
double critical_visibility(const CorrelatorFunctional& f, const std::vector<std::vector<Observable>>& observables,
                           const DensityMatrix& state, double bound);

}  // namespace monobell
