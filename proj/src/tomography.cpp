#include "monobell/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "monobell/errors.hpp"
#include "monobell/rng.hpp"

namespace monobell {

namespace {

ComplexMatrix axis_matrix(int axis) {
  switch (axis) {
    case 0: return pauli::x();
    case 1: return pauli::y();
    default: return pauli::z();
  }
}

void require_two_qubits(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw ConfigError("tomography: two-qubit state required");
}

ComplexMatrix polarizer(double t) {
  const double c = std::cos(t), s = std::sin(t);
  return ComplexMatrix{{c * c, c * s}, {c * s, s * s}};
}

}  // namespace

TomographyFrequencies exact_tomography_frequencies(const DensityMatrix& rho) {
  require_two_qubits(rho);
  TomographyFrequencies f{};
  const auto id = pauli::id();
  for (int i = 0; i < 3; ++i) {
    const auto si = axis_matrix(i);
    for (int j = 0; j < 3; ++j) {
      const auto sj = axis_matrix(j);
      for (int o = 0; o < 4; ++o) {
        const double ea = o / 2 == 0 ? 1.0 : -1.0;
        const double eb = o % 2 == 0 ? 1.0 : -1.0;
        const auto pa = (id + si * Complex(ea)) * Complex(0.5);
        const auto pb = (id + sj * Complex(eb)) * Complex(0.5);
        f[static_cast<std::size_t>(3 * i + j)][static_cast<std::size_t>(o)] =
            std::max(0.0, expectation(rho, kron(pa, pb)));
      }
    }
  }
  return f;
}

TomographyCounts synthesize_tomography_counts(const DensityMatrix& rho, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw ConfigError("tomography: shots must be >= 1");
  const auto probs = exact_tomography_frequencies(rho);
  TomographyCounts out;
  out.shots = shots;
  for (std::size_t s = 0; s < 9; ++s) {
    CounterRng rng(seed, s);
    std::int64_t remaining = shots;
    double mass = probs[s][0] + probs[s][1] + probs[s][2] + probs[s][3];
    for (std::size_t o = 0; o < 3; ++o) {
      const double p = mass > 0.0 ? std::clamp(probs[s][o] / mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::int64_t> draw(remaining, p);
      const std::int64_t k = remaining > 0 ? draw(rng) : 0;
      out.counts[s][o] = k;
      remaining -= k;
      mass -= probs[s][o];
    }
    out.counts[s][3] = remaining;
  }
  return out;
}

DensityMatrix reconstruct_density(const TomographyCounts& counts) {
  TomographyFrequencies f{};
  for (std::size_t s = 0; s < 9; ++s) {
    std::int64_t total = 0;
    for (auto n : counts.counts[s]) {
      if (n < 0) throw ConfigError("tomography: negative count");
      total += n;
    }
    if (total == 0) throw ConfigError("tomography: setting " + std::to_string(s) + " has no events");
    for (std::size_t o = 0; o < 4; ++o)
      f[s][o] = static_cast<double>(counts.counts[s][o]) / static_cast<double>(total);
  }
  return reconstruct_density(f);
}

DensityMatrix reconstruct_density(const TomographyFrequencies& freqs) {
  // t[mu][nu] = <sigma_mu x sigma_nu>, index 0 is the identity.
  double t[4][4] = {};
  t[0][0] = 1.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const auto& p = freqs[static_cast<std::size_t>(3 * i + j)];
      const double norm = p[0] + p[1] + p[2] + p[3];
      if (!(norm > 0.0)) throw ConfigError("tomography: missing setting");
      t[i + 1][j + 1] = (p[0] - p[1] - p[2] + p[3]) / norm;
      // Marginals are seen in three settings each; average them.
      t[i + 1][0] += (p[0] + p[1] - p[2] - p[3]) / norm / 3.0;
      t[0][j + 1] += (p[0] - p[1] + p[2] - p[3]) / norm / 3.0;
    }
  }
  const std::array<ComplexMatrix, 4> sigma{pauli::id(), pauli::x(), pauli::y(), pauli::z()};
  ComplexMatrix m = ComplexMatrix::zero(4, 4);
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu)
      if (t[mu][nu] != 0.0) m += kron(sigma[mu], sigma[nu]) * Complex(0.25 * t[mu][nu]);
  return project_to_state(m);
}

double fidelity_to_bell_state(const DensityMatrix& rho) {
  require_two_qubits(rho);
  const auto& m = rho.matrix();
  return 0.5 * (m(0, 0) + m(0, 3) + m(3, 0) + m(3, 3)).real();
}

DensityMatrix werner_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("werner_state: v must lie in [0, 1]");
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<Complex, 4> phi{r, 0.0, 0.0, r};
  return DensityMatrix(DensityMatrix::pure(phi).matrix() * Complex(v) +
                       ComplexMatrix::identity(4) * Complex((1.0 - v) / 4.0));
}

double fit_visibility(const std::vector<double>& theta2, const std::vector<double>& rate, bool* degenerate) {
  if (theta2.size() != rate.size()) throw ConfigError("fit_visibility: size mismatch");
  auto flag = [&](bool d) {
    if (degenerate) *degenerate = d;
  };
  if (theta2.size() < 3) {
    flag(true);
    return 0.0;
  }
  // Normal equations for r = a + b cos 2t + c sin 2t.
  double n[3][4] = {};
  for (std::size_t k = 0; k < theta2.size(); ++k) {
    const double basis[3] = {1.0, std::cos(2.0 * theta2[k]), std::sin(2.0 * theta2[k])};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) n[i][j] += basis[i] * basis[j];
      n[i][3] += basis[i] * rate[k];
    }
  }
  double scale = 0.0;
  for (auto& row : n) scale = std::max(scale, std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]));
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(n[r][col]) > std::abs(n[piv][col])) piv = r;
    if (std::abs(n[piv][col]) <= 1e-12 * scale) {
      flag(true);
      return 0.0;
    }
    std::swap(n[piv], n[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = n[r][col] / n[col][col];
      for (int c = col; c < 4; ++c) n[r][c] -= f * n[col][c];
    }
  }
  const double a = n[0][3] / n[0][0];
  const double b = n[1][3] / n[1][1];
  const double c = n[2][3] / n[2][2];
  const double amp = std::hypot(b, c);
  if (!(a > 0.0) || amp <= 1e-12 * a) {
    flag(true);
    return 0.0;
  }
  flag(false);
  return amp / a;
}

VisibilityCurve visibility_curve(const DensityMatrix& rho, double theta1, const std::vector<double>& theta2_grid) {
  require_two_qubits(rho);
  VisibilityCurve out;
  out.theta1 = theta1;
  out.theta2 = theta2_grid;
  const auto p1 = polarizer(theta1);
  for (double t2 : theta2_grid) out.rate.push_back(std::max(0.0, expectation(rho, kron(p1, polarizer(t2)))));
  out.visibility = fit_visibility(out.theta2, out.rate, &out.degenerate);
  return out;
}

}  // namespace monobell
