#pragma once

// Small dense complex linear algebra for qubit registers (dimension <= 16).
//
// Tensor-factor convention: subsystem 0 is the leftmost (slowest-varying)
// factor of every Kronecker product. Everything above this layer relies on it.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monobell {

using Complex = std::complex<double>;

class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Row-major nested initializer, e.g. {{0, 1}, {1, 0}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);
  /// |v><v| for a column vector v.
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  std::vector<Complex> column(std::size_t c) const;

  /// Largest absolute entry difference; throws on shape mismatch.
  double max_abs_diff(const ComplexMatrix& other) const;
  bool approx_equal(const ComplexMatrix& other, double tol) const;
  bool is_hermitian(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::span<const ComplexMatrix> factors);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k belongs to values[k]
};

/// Cyclic complex Jacobi. Rejects inputs that are not Hermitian within 1e-10.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// Partial trace over every subsystem not listed in `keep`. Works on any
/// square operator, not only states.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> keep,
                            std::span<const std::size_t> dims);

/// Unitary P with P(v_0 (x) ... (x) v_{n-1}) = w_0 (x) ... with w_{perm[k]} = v_k,
/// i.e. the content of subsystem k moves to slot perm[k].
ComplexMatrix permutation_operator(std::span<const std::size_t> perm,
                                   std::span<const std::size_t> dims);

/// Two-qubit swap, S = sum_ij |ij><ji|.
ComplexMatrix swap_operator();

namespace pauli {
ComplexMatrix id();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates hermiticity, unit trace and positivity.
  explicit DensityMatrix(ComplexMatrix m);
  static DensityMatrix pure(std::span<const Complex> ket);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Two-outcome observable: Hermitian with eigenvalues in {-1, +1}.
class Observable {
 public:
  explicit Observable(ComplexMatrix m);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  /// (I + O)/2 for outcome index 0 (value +1), (I - O)/2 for index 1.
  ComplexMatrix projector(int outcome) const;

 private:
  ComplexMatrix m_;
};

/// Tr(rho O); the imaginary part must vanish within 1e-9.
double expectation(const DensityMatrix& rho, const ComplexMatrix& o);
double expectation(const DensityMatrix& rho, const Observable& o);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep,
                            std::span<const std::size_t> dims);

/// Map negative eigenvalues to zero and renormalize the trace.
DensityMatrix project_to_state(const ComplexMatrix& hermitian);

/// O = sum_k sign(lambda_k) |v_k><v_k| with sign(0) = +1.
ComplexMatrix sign_operator(const ComplexMatrix& hermitian);

std::string to_string(const ComplexMatrix& m, int precision = 6);

}  // namespace monobell
