// Copyright 2026 The localgt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "localgt/linalg.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "localgt/errors.h"

namespace localgt {
namespace {

void RequireSameSize(std::span<const double> a, std::span<const double> b,
                     const char* op) {
  if (a.size() != b.size()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

// Cholesky factor of an SPD matrix; returns false on a nonpositive pivot.
bool CholeskyFactor(const Matrix& g, Matrix& l) {
  const std::size_t n = g.rows();
  l = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = g(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

Vector CholeskySubstitute(const Matrix& l, std::span<const double> rhs) {
  const std::size_t n = l.rows();
  Vector z(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z[k];
    z[i] = s / l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * z[k];
    z[ii] = s / l(ii, ii);
  }
  return z;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("Matrix: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Constant(std::size_t rows, std::size_t cols, double value) {
  return Matrix(rows, cols, value);
}

Vector Matrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
  if (values.size() != rows_) throw InvalidArgument("set_column: size mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix Transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

Matrix MatMul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgument("MatMul: inner dimensions differ (" +
                          std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

Vector MatVec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InvalidArgument("MatVec: dimension mismatch");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = Dot(a.row(i), x);
  return out;
}

Vector MatTVec(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw InvalidArgument("MatTVec: dimension mismatch");
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) Axpy(x[i], a.row(i), out);
  return out;
}

Matrix Subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("Subtract: shape mismatch");
  Matrix out = a;
  auto od = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] -= bd[i];
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  RequireSameSize(a, b, "Dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double SquaredNorm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double Norm(std::span<const double> x) { return std::sqrt(SquaredNorm(x)); }

double FrobeniusNorm(const Matrix& m) { return Norm(m.data()); }

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  RequireSameSize(x, y, "Axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector Sub(std::span<const double> a, std::span<const double> b) {
  RequireSameSize(a, b, "Sub");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector Scaled(double alpha, std::span<const double> x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i];
  return out;
}

double SpectralNorm(const Matrix& m, double tol, std::size_t max_iters) {
  if (m.empty()) throw InvalidArgument("SpectralNorm: empty matrix");
  if (!(tol > 0.0)) throw InvalidArgument("SpectralNorm: tol must be positive");
  const auto entries = m.data();
  if (std::all_of(entries.begin(), entries.end(),
                  [](double v) { return v == 0.0; })) {
    return 0.0;
  }

  const std::size_t n = m.cols();
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
  double nv = Norm(v);
  for (double& e : v) e /= nv;

  double estimate = 0.0;
  bool restarted = false;
  for (std::size_t it = 0; it < max_iters; ++it) {
    Vector u = MatVec(m, v);
    const double next = Norm(u);
    Vector w = MatTVec(m, u);
    const double nw = Norm(w);
    if (nw == 0.0) {
      // The ramp landed in the null space; restart from the heaviest column.
      if (restarted) return 0.0;
      restarted = true;
      std::size_t best = 0;
      double best_norm = -1.0;
      for (std::size_t c = 0; c < n; ++c) {
        const double cn = Norm(m.column(c));
        if (cn > best_norm) best_norm = cn, best = c;
      }
      std::fill(v.begin(), v.end(), 0.0);
      v[best] = 1.0;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (it > 0 && std::abs(next - estimate) <= tol * next) return next;
    estimate = next;
  }
  throw NonConvergenceError(
      "SpectralNorm: no convergence after " + std::to_string(max_iters) +
          " iterations",
      estimate);
}

Vector SymmetricEigenvalues(const Matrix& m, double tol,
                            std::size_t max_sweeps) {
  if (m.rows() != m.cols())
    throw InvalidArgument("SymmetricEigenvalues: matrix not square");
  const std::size_t n = m.rows();
  Matrix a = m;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    }
    if (off <= tol * tol * total || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

Vector CholeskySolve(const Matrix& g, std::span<const double> rhs) {
  if (g.rows() != g.cols() || g.rows() != rhs.size())
    throw InvalidArgument("CholeskySolve: shape mismatch");
  Matrix l;
  if (!CholeskyFactor(g, l))
    throw SingularMatrixError("CholeskySolve: matrix not positive definite");
  return CholeskySubstitute(l, rhs);
}

Vector MinNormSolution(const Matrix& a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() == 0)
    throw InvalidArgument("MinNormSolution: empty design matrix");
  if (b.size() != n) throw InvalidArgument("MinNormSolution: b has wrong length");

  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      gram(i, j) = gram(j, i) = Dot(a.row(i), a.row(j));

  Matrix l;
  if (!CholeskyFactor(gram, l)) {
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += gram(i, i);
    const double jitter = 1e-12 * trace / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) gram(i, i) += jitter;
    if (!CholeskyFactor(gram, l))
      throw SingularMatrixError("MinNormSolution: Gram matrix is singular");
  }
  // λ_max by power iteration, λ_min by inverse iteration through the factor.
  const double hi = SpectralNorm(gram);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i);
  double inv_lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double nv = Norm(v);
    for (double& e : v) e /= nv;
    Vector w = CholeskySubstitute(l, v);
    const double next = Dot(v, w);
    v = std::move(w);
    if (std::abs(next - inv_lo) <= 1e-6 * next) {
      inv_lo = next;
      break;
    }
    inv_lo = next;
  }
  const double cond = hi * inv_lo;
  if (!(cond <= 1e12)) {
    throw SingularMatrixError(
        "MinNormSolution: Gram matrix condition estimate " +
        std::to_string(cond) + " exceeds 1e12 (rows not independent)");
  }
  return MatTVec(a, CholeskySubstitute(l, b));
}

}  // namespace localgt
