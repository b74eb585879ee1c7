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

#ifndef LOCALGT_THEORY_H_
#define LOCALGT_THEORY_H_

#include <cstddef>

namespace localgt {

// Problem and network constants entering the complexity bounds. All bound
// evaluators below set the hidden absolute constants to 1; the numbers are
// order-level and meant for comparing trends, not predicting round counts.
struct BoundInputs {
  double L = 1.0;
  double mu = 1.0;
  double delta = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  std::size_t K = 0;
  double epsilon = 1e-6;
};

// η = 1 / (2(L + Kμ/(1-ρ) + Kδ/(1-ρ) + ρK(L+δ)/(1-ρ)²)), the step size
// under which local DGT attains its strongly convex rate.
double StepSizeDgt(const BoundInputs& in);

// Local DGT, strongly convex f:
//   (L/(μ(K+1)) + (δ+μ)/(μ(1-ρ)) + ρ(δ+L)/((1-ρ)²μ)) · ln(1/(με))
double RoundsDgtStronglyConvex(const BoundInputs& in);

// Local DGT, PL and β-weakly convex f: β joins δ in both network terms.
// Multiplied by ln(1/(με)) so that β = 0 matches the strongly convex case.
double RoundsDgtPl(const BoundInputs& in);

// 1 - (δ/μ)². Throws DomainError when δ >= μ (the local DGD analysis under
// restricted heterogeneity does not apply).
double Zeta(const BoundInputs& in);

// Local DGD, over-parameterized PL f with δ < μ:
//   (L/(μ(K+1)ζ) + 1/(1-ρ) + (β+ρ²L)/(μ(1-ρ)²ζ²)) · ln(1/(με))
double RoundsDgdPl(const BoundInputs& in);

// Local DGD, over-parameterized least squares (any δ):
//   (L/(μ(K+1)) + δ²/(μ²(1-ρ))) · ln(1/ε)
double RoundsDgdLeastSquares(const BoundInputs& in);

// Local DGT, over-parameterized least squares:
//   (L/(μ(K+1)) + (δ+μ)/(μ(1-ρ)) + ρ(δ+L)/((1-ρ)²μ)) · ln(1/ε)
double RoundsDgtLeastSquares(const BoundInputs& in);

// ⌊L(1-ρ)² / (ρ(L-μ) + δ + μ)⌋, clamped at 0: the number of local updates
// past which the network terms dominate.
std::size_t OptimalLocalUpdates(const BoundInputs& in);

}  // namespace localgt

#endif  // LOCALGT_THEORY_H_
