#pragma once

// Two-qubit Pauli tomography by linear inversion, and polarizer fringe
// visibilities. H is |0>, V is |1>.

#include <array>
#include <cstdint>
#include <vector>

#include "monobell/qlinalg.hpp"

namespace monobell {

enum class PauliAxis { kX = 0, kY = 1, kZ = 2 };

/// Setting index 3 * first axis + second axis; outcomes (++, +-, -+, --).
struct TomographyCounts {
  std::array<std::array<std::int64_t, 4>, 9> counts{};
  std::int64_t shots = 0;  // per setting
};

/// Outcome probabilities in the same layout; the infinite-shot limit.
using TomographyFrequencies = std::array<std::array<double, 4>, 9>;

TomographyFrequencies exact_tomography_frequencies(const DensityMatrix& rho);

/// Multinomial draw per setting from CounterRng(seed, setting).
TomographyCounts synthesize_tomography_counts(const DensityMatrix& rho, std::int64_t shots, std::uint64_t seed);

/// Throws ConfigError if a setting has no events.
DensityMatrix reconstruct_density(const TomographyCounts& counts);
DensityMatrix reconstruct_density(const TomographyFrequencies& freqs);

double fidelity_to_bell_state(const DensityMatrix& rho);

/// v |Phi+><Phi+| + (1 - v) I/4.
DensityMatrix werner_state(double v);

struct VisibilityCurve {
  double theta1 = 0.0;
  std::vector<double> theta2;
  std::vector<double> rate;
  double visibility = 0.0;
  bool degenerate = false;  // flat or non-positive fit; visibility forced to 0
};

/// Rate Tr[rho (P(theta1) x P(theta2))] with P(t) the projector on
/// cos t |H> + sin t |V>; V = |B| / A from the fit A + B cos(2 (theta2 - phi)).
VisibilityCurve visibility_curve(const DensityMatrix& rho, double theta1, const std::vector<double>& theta2_grid);

/// Least-squares fit of the same sinusoid to arbitrary samples.
double fit_visibility(const std::vector<double>& theta2, const std::vector<double>& rate, bool* degenerate = nullptr);

}  // namespace monobell
