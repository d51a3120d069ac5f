#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's linear algebra or protocol code.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M2 = std::array<std::array<C, 2>, 2>;
using V8 = std::array<C, 8>;

inline M2 planar(double phi) {
  // cos(phi) Z + sin(phi) X
  return M2{{{C(std::cos(phi)), C(std::sin(phi))}, {C(std::sin(phi)), C(-std::cos(phi))}}};
}

/// cos(phi) X + sin(phi) Y
inline M2 equatorial(double phi) {
  return M2{{{C(0), std::polar(1.0, -phi)}, {std::polar(1.0, phi), C(0)}}};
}

inline M2 scaled_identity(double s) { return M2{{{C(s), C(0)}, {C(0), C(s)}}}; }

/// <psi| (a x b x c) |psi> with qubit 0 the most significant bit.
inline double expect3(const V8& psi, const M2& a, const M2& b, const M2& c) {
  C acc = 0;
  for (int r = 0; r < 8; ++r)
    for (int s = 0; s < 8; ++s) {
      const C m = a[(r >> 2) & 1][(s >> 2) & 1] * b[(r >> 1) & 1][(s >> 1) & 1] * c[r & 1][s & 1];
      acc += std::conj(psi[r]) * m * psi[s];
    }
  return acc.real();
}

/// Exchanges the qubits at bit positions p and q of a 3-qubit vector.
inline V8 swap_qubits(const V8& psi, int p, int q) {
  V8 out{};
  for (int i = 0; i < 8; ++i) {
    const int bp = (i >> (2 - p)) & 1, bq = (i >> (2 - q)) & 1;
    int j = i & ~(1 << (2 - p)) & ~(1 << (2 - q));
    j |= bq << (2 - p);
    j |= bp << (2 - q);
    out[j] = psi[i];
  }
  return out;
}

/// (cos t |00> + sin t |11>)_{AB} x |0>_C.
inline V8 source_state(double theta) {
  V8 psi{};
  psi[0b000] = std::cos(theta);
  psi[0b110] = std::sin(theta);
  return psi;
}

/// n_z Z + n_x X + n_y Y
inline M2 bloch(const std::array<double, 3>& n) {
  return M2{{{C(n[0]), C(n[1], -n[2])}, {C(n[1], n[2]), C(-n[0])}}};
}

using Observables = std::array<std::array<M2, 2>, 3>;

/// Full 8x8 evaluation of the wired three-block functional. The holder's
/// classical bit enters as beta times identity.
inline double protocol_value_8x8(double theta, double beta, const Observables& obs,
                                 const std::array<double, 4>& signs = {1, 1, 1, -1}) {
  const V8 psi = source_state(theta);
  double total = 0.0;
  for (int holder = 0; holder < 3; ++holder) {
    V8 state = psi;
    if (holder == 0) state = swap_qubits(psi, 0, 2);
    if (holder == 1) state = swap_qubits(psi, 1, 2);
    int lo = -1, hi = -1;
    for (int p = 0; p < 3; ++p) {
      if (p == holder) continue;
      (lo < 0 ? lo : hi) = p;
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::array<M2, 3> ops;
        ops[holder] = scaled_identity(beta);
        ops[lo] = obs[lo][i];
        ops[hi] = obs[hi][j];
        total += signs[2 * i + j] * expect3(state, ops[0], ops[1], ops[2]);
      }
  }
  return total;
}

/// Same with planar observables planar(angle[party][input]).
inline double protocol_value_8x8_planar(double theta, double beta, const std::array<std::array<double, 2>, 3>& angle,
                                 const std::array<double, 4>& signs = {1, 1, 1, -1}) {
  Observables obs;
  for (int p = 0; p < 3; ++p)
    for (int i = 0; i < 2; ++i) obs[p][i] = planar(angle[p][i]);
  return protocol_value_8x8(theta, beta, obs, signs);
}

/// sqrt(2)(1 + s)(beta_A + beta_C) + (1 - s) beta_B, default measurements.
inline double protocol_closed_form(double sin2theta, double beta_a, double beta_b, double beta_c) {
  return std::sqrt(2.0) * (1.0 + sin2theta) * (beta_a + beta_c) + (1.0 - sin2theta) * beta_b;
}

/// Correlator of planar observables on cos t|00> + sin t|11>.
inline double pair_correlator(double s, double p1, double p2) {
  return std::cos(p1) * std::cos(p2) + s * std::sin(p1) * std::sin(p2);
}

/// Maximum of the wired functional (beta = 1, signs +,+,+,-) over planar
/// observables: grid over Alice's and Bob's angles, Charlie's two angles in
/// closed form, then local zooming around the best grid point.
inline double protocol_grid_optimum(double s, int grid = 24) {
  const std::array<double, 4> sg{1, 1, 1, -1};
  auto value = [&](double a0, double a1, double b0, double b1) {
    const double a[2] = {a0, a1}, b[2] = {b0, b1};
    double v = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) v += sg[2 * i + j] * pair_correlator(s, a[i], b[j]);
    // Charlie's angle c_k pairs with Alice (lower) and Bob (lower).
    for (int k = 0; k < 2; ++k) {
      double ux = 0.0, uy = 0.0;
      for (int i = 0; i < 2; ++i) {
        ux += sg[2 * i + k] * (std::cos(a[i]) + std::cos(b[i]));
        uy += sg[2 * i + k] * s * (std::sin(a[i]) + std::sin(b[i]));
      }
      v += std::hypot(ux, uy);
    }
    return v;
  };
  const double pi = std::acos(-1.0);
  double best = -1e300;
  std::array<double, 4> arg{};
  for (int i0 = 0; i0 < grid; ++i0)
    for (int i1 = 0; i1 < grid; ++i1)
      for (int j0 = 0; j0 < grid; ++j0)
        for (int j1 = 0; j1 < grid; ++j1) {
          const std::array<double, 4> p{2 * pi * i0 / grid, 2 * pi * i1 / grid, 2 * pi * j0 / grid,
                                        2 * pi * j1 / grid};
          const double v = value(p[0], p[1], p[2], p[3]);
          if (v > best) {
            best = v;
            arg = p;
          }
        }
  double step = 2 * pi / grid;
  while (step > 1e-7) {
    bool moved = false;
    for (int d = 0; d < 4; ++d)
      for (double dir : {-1.0, 1.0}) {
        auto p = arg;
        p[d] += dir * step;
        const double v = value(p[0], p[1], p[2], p[3]);
        if (v > best) {
          best = v;
          arg = p;
          moved = true;
        }
      }
    if (!moved) step *= 0.5;
  }
  return best;
}

/// Static value of the wired functional on (|000> + |111>)/sqrt2 with every
/// observable equatorial; ang[party][input] covers inputs 0, 1 and 2.
inline double ghz_wired_value(const std::array<std::array<double, 3>, 3>& ang,
                              const std::array<double, 4>& signs = {1, 1, 1, -1}) {
  V8 ghz{};
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  double total = 0.0;
  for (int holder : {2, 1, 0}) {
    int lo = -1, hi = -1;
    for (int p = 0; p < 3; ++p) {
      if (p == holder) continue;
      (lo < 0 ? lo : hi) = p;
    }
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> xs{};
      xs[holder] = 2;
      xs[lo] = k / 2;
      xs[hi] = k % 2;
      total += signs[k] * expect3(ghz, equatorial(ang[0][xs[0]]), equatorial(ang[1][xs[1]]), equatorial(ang[2][xs[2]]));
    }
  }
  return total;
}

/// Maximum over all +-1 assignments of a correlator functional on binary
/// parties; terms are (inputs per party with -1 for absent, coefficient).
struct Term {
  std::vector<int> inputs;
  double coeff;
};

inline double classical_max(const std::vector<Term>& terms, int parties, int inputs) {
  const int bits = parties * inputs;
  double best = -1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    double v = 0.0;
    for (const auto& t : terms) {
      double prod = t.coeff;
      for (int p = 0; p < parties; ++p) {
        if (t.inputs[p] < 0) continue;
        prod *= (mask >> (p * inputs + t.inputs[p])) & 1 ? -1.0 : 1.0;
      }
      v += prod;
    }
    best = std::max(best, v);
  }
  return best;
}

/// Twelve-term wired functional, blocks by holder C, B, A.
inline std::vector<Term> wired_terms(const std::array<double, 4>& signs = {1, 1, 1, -1}) {
  std::vector<Term> out;
  for (int holder : {2, 1, 0}) {
    std::vector<int> others;
    for (int p = 0; p < 3; ++p)
      if (p != holder) others.push_back(p);
    for (int k = 0; k < 4; ++k) {
      std::vector<int> xs(3);
      xs[holder] = 2;
      xs[others[0]] = k / 2;
      xs[others[1]] = k % 2;
      out.push_back({xs, signs[k]});
    }
  }
  return out;
}

}  // namespace oracle
