#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "monobell/qlinalg.hpp"

using namespace monobell;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Complex z(d(g), i == j ? 0.0 : d(g));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  return m;
}

}  // namespace

TEST_CASE("kron orders subsystem 0 leftmost") {
  const auto k = kron(pauli::z(), pauli::id());
  CHECK(k(0, 0) == Complex(1));
  CHECK(k(2, 2) == Complex(-1));
  CHECK(k(1, 1) == Complex(1));
  const std::array<Complex, 2> zero{1.0, 0.0}, one{0.0, 1.0};
  const auto a = ComplexMatrix::outer(zero), b = ComplexMatrix::outer(one);
  // |0><0| x |1><1| = |01><01|, index 1.
  CHECK(kron(a, b)(1, 1) == Complex(1));
}

TEST_CASE("pauli algebra") {
  const auto x = pauli::x(), y = pauli::y(), z = pauli::z();
  CHECK((x * y).approx_equal(z * Complex(0, 1), 1e-15));
  CHECK((x * x).approx_equal(pauli::id(), 1e-15));
  CHECK(x.is_hermitian(0.0));
}

TEST_CASE("hermitian_eig reconstructs random matrices") {
  std::mt19937_64 g(42);
  for (std::size_t n : {1u, 2u, 3u, 4u, 8u, 16u}) {
    const auto m = random_hermitian(n, g);
    const auto e = hermitian_eig(m);
    ComplexMatrix rebuilt = ComplexMatrix::zero(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = e.vectors.column(k);
      rebuilt += ComplexMatrix::outer(v) * Complex(e.values[k]);
      if (k > 0) CHECK(e.values[k] >= e.values[k - 1]);
    }
    CHECK(rebuilt.max_abs_diff(m) < 1e-10);
    const auto gram = e.vectors.adjoint() * e.vectors;
    CHECK(gram.max_abs_diff(ComplexMatrix::identity(n)) < 1e-10);
  }
}

TEST_CASE("hermitian_eig rejects non-hermitian input") {
  ComplexMatrix m{{1.0, 2.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(hermitian_eig(m), LinalgError);
}

TEST_CASE("eigenvalues of known matrices") {
  const auto e = hermitian_eig(pauli::y());
  CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  const auto s = hermitian_eig(swap_operator());
  CHECK(s.values[0] == doctest::Approx(-1.0));
  CHECK(s.values[3] == doctest::Approx(1.0));
}

TEST_CASE("partial trace of a product state returns its factors") {
  const auto a = DensityMatrix(pauli::id() * Complex(0.5) + pauli::x() * Complex(0.3));
  const auto b = DensityMatrix(pauli::id() * Complex(0.5) + pauli::z() * Complex(-0.2));
  const DensityMatrix ab(kron(a.matrix(), b.matrix()));
  const std::array<std::size_t, 2> dims{2, 2};
  const std::array<std::size_t, 1> k0{0}, k1{1};
  CHECK(partial_trace(ab, k0, dims).matrix().max_abs_diff(a.matrix()) < 1e-15);
  CHECK(partial_trace(ab, k1, dims).matrix().max_abs_diff(b.matrix()) < 1e-15);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  const double r = 1 / std::sqrt(2.0);
  const std::array<Complex, 4> phi{r, 0, 0, r};
  const auto rho = DensityMatrix::pure(phi);
  const std::array<std::size_t, 2> dims{2, 2};
  const std::array<std::size_t, 1> k{1};
  CHECK(partial_trace(rho, k, dims).matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
}

TEST_CASE("permutation operator moves subsystem contents") {
  // |0>|1>|+> with perm {2, 1, 0}: content of slot 0 goes to slot 2.
  const std::array<std::size_t, 3> dims{2, 2, 2};
  const std::array<std::size_t, 3> perm{2, 1, 0};
  const auto p = permutation_operator(perm, dims);
  const auto a = pauli::id() * Complex(0.5) + pauli::z() * Complex(0.5);   // |0><0|
  const auto b = pauli::id() * Complex(0.5) - pauli::z() * Complex(0.5);   // |1><1|
  const auto c = pauli::id() * Complex(0.5) + pauli::x() * Complex(0.5);   // |+><+|
  const std::array<ComplexMatrix, 3> in{a, b, c}, out{c, b, a};
  CHECK((p * kron(in) * p.adjoint()).max_abs_diff(kron(out)) < 1e-15);
  CHECK((p * p.adjoint()).max_abs_diff(ComplexMatrix::identity(8)) < 1e-15);
  const std::array<std::size_t, 2> d2{2, 2}, swap{1, 0};
  CHECK(permutation_operator(swap, d2).max_abs_diff(swap_operator()) == 0.0);
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(pauli::id()), LinalgError);                   // trace 2
  CHECK_THROWS_AS(DensityMatrix(pauli::z() * Complex(0.5) + pauli::id() * Complex(0.1)), LinalgError);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::identity(3) * Complex(1.0 / 3)), LinalgError);  // not 2^k
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(4));
}

TEST_CASE("observables") {
  CHECK_NOTHROW(Observable(pauli::x()));
  CHECK_THROWS_AS(Observable(pauli::x() * Complex(0.5)), LinalgError);
  const Observable z(pauli::z());
  CHECK((z.projector(0) + z.projector(1)).max_abs_diff(pauli::id()) < 1e-15);
  CHECK((z.projector(0) - z.projector(1)).max_abs_diff(pauli::z()) < 1e-15);
}

TEST_CASE("expectation") {
  const std::array<Complex, 2> plus{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
  const auto rho = DensityMatrix::pure(plus);
  CHECK(expectation(rho, pauli::x()) == doctest::Approx(1.0));
  CHECK(expectation(rho, pauli::z()) == doctest::Approx(0.0));
  const double t = 0.3;
  const std::array<Complex, 4> psi{std::cos(t), 0, 0, std::sin(t)};
  const auto r2 = DensityMatrix::pure(psi);
  CHECK(expectation(r2, kron(pauli::x(), pauli::x())) == doctest::Approx(std::sin(2 * t)));
  CHECK(expectation(r2, kron(pauli::y(), pauli::y())) == doctest::Approx(-std::sin(2 * t)));
}

TEST_CASE("project_to_state clips negative eigenvalues") {
  // Bloch vector of length 1.2 leaves the ball; clipping maps it to a pure state.
  const auto m = pauli::id() * Complex(0.5) + pauli::z() * Complex(0.6);
  const auto rho = project_to_state(m);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(rho.matrix()(1, 1)) < 1e-12);
}

TEST_CASE("sign operator") {
  const auto s = sign_operator(pauli::z() * Complex(3.0) + pauli::id() * Complex(1.0));
  CHECK(s.max_abs_diff(pauli::z()) < 1e-12);
  CHECK(sign_operator(ComplexMatrix::zero(2, 2)).max_abs_diff(pauli::id()) < 1e-12);
}
