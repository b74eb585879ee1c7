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

#ifndef LOCALGT_LINALG_H_
#define LOCALGT_LINALG_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace localgt {

using Vector = std::vector<double>;

// Dense row-major matrix. Reductions throughout this module sum left to
// right so that traces are bit-reproducible.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);
  static Matrix Constant(std::size_t rows, std::size_t cols, double value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Vector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix Transpose(const Matrix& m);
Matrix MatMul(const Matrix& a, const Matrix& b);
Vector MatVec(const Matrix& a, std::span<const double> x);
// Aᵀx without forming the transpose.
Vector MatTVec(const Matrix& a, std::span<const double> x);
Matrix Subtract(const Matrix& a, const Matrix& b);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> x);
double SquaredNorm(std::span<const double> x);
double FrobeniusNorm(const Matrix& m);

// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector Sub(std::span<const double> a, std::span<const double> b);
Vector Scaled(double alpha, std::span<const double> x);

// Largest singular value by power iteration on MᵀM. The start vector is the
// normalized ramp (1, 2, ..., n), never the all-ones vector, because the
// dominant direction of W - J is orthogonal to 1. Stops once the relative
// change in the estimate drops below `tol`.
double SpectralNorm(const Matrix& m, double tol = 1e-13,
                    std::size_t max_iters = 200000);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotation, ascending.
Vector SymmetricEigenvalues(const Matrix& m, double tol = 1e-14,
                            std::size_t max_sweeps = 100);

// x⋆ = Aᵀ(AAᵀ)⁻¹b for a full-row-rank A (more columns than rows).
// The Gram system is solved by Cholesky; on failure a single jitter of
// 1e-12·trace/N is added to the diagonal before giving up.
Vector MinNormSolution(const Matrix& a, std::span<const double> b);

// Solves the SPD system g·z = rhs in place of rhs. Throws
// SingularMatrixError if g is not numerically positive definite.
Vector CholeskySolve(const Matrix& g, std::span<const double> rhs);

}  // namespace localgt

#endif  // LOCALGT_LINALG_H_
