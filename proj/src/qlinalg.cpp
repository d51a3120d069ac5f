#include "monobell/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace monobell {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw LinalgError(std::string(what) + ": shape mismatch");
  }
}

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Mixed-radix digits of `index`, most significant first.
void digits_of(std::size_t index, std::span<const std::size_t> dims, std::vector<std::size_t>& out) {
  out.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

std::size_t index_of(std::span<const std::size_t> digits, std::span<const std::size_t> dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) throw LinalgError("ComplexMatrix: entry count != rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw LinalgError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw LinalgError("trace: matrix not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  require_same_shape(*this, other, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  return worst;
}

bool ComplexMatrix::approx_equal(const ComplexMatrix& other, double tol) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && max_abs_diff(other) <= tol;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw LinalgError("operator*: inner dimension mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols_ != v.size()) throw LinalgError("operator*: vector length mismatch");
  std::vector<Complex> out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::identity(1);
  ComplexMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_hermitian(1e-10)) throw LinalgError("hermitian_eig: input is not Hermitian");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale = 0.0;
  for (auto e : m.entries()) scale += std::norm(e);
  const double tol = 1e-12 * std::max(1.0, std::sqrt(scale));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag < 1e-300) continue;
        // Phase-rotate column q so a(p,q) becomes real, then a real Jacobi rotation.
        const Complex phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = D R restricted to (p,q), D = diag(1, conj(phase)), R = [[c, s], [-s, c]].
        const Complex gpp = c, gpq = s;
        const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // A <- A G
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- G^dagger A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {  // V <- V G
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> keep,
                            std::span<const std::size_t> dims) {
  if (!m.is_square() || product(dims) != m.rows()) throw LinalgError("partial_trace: dims do not match operator");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size() || kept[k]) throw LinalgError("partial_trace: invalid subsystem index");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_sorted(keep.begin(), keep.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<std::size_t> keep_dims;
  for (std::size_t k : keep_sorted) keep_dims.push_back(dims[k]);
  const std::size_t out_dim = product(keep_dims);

  ComplexMatrix out(out_dim, out_dim);
  std::vector<std::size_t> di, dj, ki(keep_sorted.size()), kj(keep_sorted.size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    digits_of(i, dims, di);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      digits_of(j, dims, dj);
      bool traced_match = true;
      for (std::size_t k = 0; k < dims.size() && traced_match; ++k)
        if (!kept[k] && di[k] != dj[k]) traced_match = false;
      if (!traced_match) continue;
      for (std::size_t k = 0; k < keep_sorted.size(); ++k) {
        ki[k] = di[keep_sorted[k]];
        kj[k] = dj[keep_sorted[k]];
      }
      out(index_of(ki, keep_dims), index_of(kj, keep_dims)) += m(i, j);
    }
  }
  return out;
}

ComplexMatrix permutation_operator(std::span<const std::size_t> perm, std::span<const std::size_t> dims) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw LinalgError("permutation_operator: size mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw LinalgError("permutation_operator: not a permutation");
    seen[p] = true;
  }
  std::vector<std::size_t> out_dims(n);
  for (std::size_t k = 0; k < n; ++k) out_dims[perm[k]] = dims[k];
  const std::size_t total = product(dims);
  ComplexMatrix p(total, total);
  std::vector<std::size_t> d, e(n);
  for (std::size_t in = 0; in < total; ++in) {
    digits_of(in, dims, d);
    for (std::size_t k = 0; k < n; ++k) e[perm[k]] = d[k];
    p(index_of(e, out_dims), in) = 1.0;
  }
  return p;
}

ComplexMatrix swap_operator() {
  ComplexMatrix s(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) s(2 * i + j, 2 * j + i) = 1.0;
  return s;
}

namespace pauli {
ComplexMatrix id() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_hermitian(kTolerance)) throw LinalgError("DensityMatrix: not Hermitian");
  const std::size_t d = m_.rows();
  if (d == 0 || (d & (d - 1)) != 0) throw LinalgError("DensityMatrix: dimension is not a power of 2");
  if (std::abs(m_.trace() - 1.0) > kTolerance) throw LinalgError("DensityMatrix: trace != 1");
  if (hermitian_eig(m_).values.front() < -kTolerance) throw LinalgError("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> ket) {
  double norm2 = 0.0;
  for (auto c : ket) norm2 += std::norm(c);
  if (norm2 <= 0.0) throw LinalgError("DensityMatrix::pure: zero vector");
  ComplexMatrix m = ComplexMatrix::outer(ket);
  m *= 1.0 / norm2;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

Observable::Observable(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_hermitian(1e-10)) throw LinalgError("Observable: not Hermitian");
  for (double ev : hermitian_eig(m_).values)
    if (std::abs(std::abs(ev) - 1.0) > 1e-8) throw LinalgError("Observable: eigenvalue outside {-1,+1}");
}

ComplexMatrix Observable::projector(int outcome) const {
  const double sign = outcome == 0 ? 1.0 : -1.0;
  return (ComplexMatrix::identity(dim()) + m_ * Complex(sign)) * Complex(0.5);
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& o) {
  if (o.rows() != rho.dim() || o.cols() != rho.dim()) throw LinalgError("expectation: dimension mismatch");
  const ComplexMatrix& r = rho.matrix();
  Complex t = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t k = 0; k < r.cols(); ++k) t += r(i, k) * o(k, i);
  if (std::abs(t.imag()) >= 1e-9) throw LinalgError("expectation: non-negligible imaginary part");
  return t.real();
}

double expectation(const DensityMatrix& rho, const Observable& o) { return expectation(rho, o.matrix()); }

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep,
                            std::span<const std::size_t> dims) {
  return DensityMatrix(partial_trace(rho.matrix(), keep, dims));
}

DensityMatrix project_to_state(const ComplexMatrix& hermitian) {
  const auto eig = hermitian_eig(hermitian);
  const std::size_t n = hermitian.rows();
  double total = 0.0;
  for (double ev : eig.values) total += std::max(ev, 0.0);
  if (total <= 0.0) throw LinalgError("project_to_state: no positive spectrum");
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::max(eig.values[k], 0.0) / total;
    if (w == 0.0) continue;
    out += ComplexMatrix::outer(eig.vectors.column(k)) * Complex(w);
  }
  // Restore exact hermiticity lost to rounding.
  out = (out + out.adjoint()) * Complex(0.5);
  return DensityMatrix(std::move(out));
}

ComplexMatrix sign_operator(const ComplexMatrix& hermitian) {
  const auto eig = hermitian_eig(hermitian);
  const std::size_t n = hermitian.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k)
    out += ComplexMatrix::outer(eig.vectors.column(k)) * Complex(eig.values[k] >= 0.0 ? 1.0 : -1.0);
  return (out + out.adjoint()) * Complex(0.5);
}

std::string to_string(const ComplexMatrix& m, int precision) {
  std::ostringstream os;
  os.precision(precision);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  return os.str();
}

}  // namespace monobell
