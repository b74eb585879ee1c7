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

#include "localgt/theory.h"

#include <cmath>
#include <string>

#include "localgt/errors.h"

namespace localgt {
namespace {

void Check(const BoundInputs& in, bool needs_mu) {
  if (!(in.rho >= 0.0 && in.rho < 1.0))
    throw DomainError("rho must lie in [0, 1), got " + std::to_string(in.rho));
  if (!(in.L > 0.0)) throw DomainError("L must be positive");
  if (!(in.delta >= 0.0)) throw DomainError("delta must be >= 0");
  if (!(in.beta >= 0.0)) throw DomainError("beta must be >= 0");
  if (needs_mu) {
    if (!(in.mu > 0.0)) throw DomainError("mu must be positive");
    if (!(in.L >= in.mu)) throw DomainError("L must be >= mu");
    if (!(in.epsilon > 0.0)) throw DomainError("eps must be positive");
  }
}

double LogInvMuEps(const BoundInputs& in) { return std::log(1.0 / (in.mu * in.epsilon)); }

double DgtFactor(const BoundInputs& in, double hetero) {
  const double k1 = static_cast<double>(in.K) + 1.0;
  const double gap = 1.0 - in.rho;
  return in.L / (in.mu * k1) + (hetero + in.mu) / (in.mu * gap) +
         in.rho * (hetero + in.L) / (gap * gap * in.mu);
}

}  // namespace

double StepSizeDgt(const BoundInputs& in) {
  Check(in, /*needs_mu=*/false);
  if (!(in.mu >= 0.0)) throw DomainError("mu must be >= 0");
  const double k = static_cast<double>(in.K);
  const double gap = 1.0 - in.rho;
  const double denom = in.L + k * in.mu / gap + k * in.delta / gap +
                       in.rho * k * (in.L + in.delta) / (gap * gap);
  return 1.0 / (2.0 * denom);
}

double RoundsDgtStronglyConvex(const BoundInputs& in) {
  Check(in, true);
  return DgtFactor(in, in.delta) * LogInvMuEps(in);
}

double RoundsDgtPl(const BoundInputs& in) {
  Check(in, true);
  return DgtFactor(in, in.delta + in.beta) * LogInvMuEps(in);
}

double Zeta(const BoundInputs& in) {
  if (!(in.mu > 0.0)) throw DomainError("mu must be positive");
  if (!(in.delta < in.mu)) {
    throw DomainError("regime: delta >= mu, local DGD bound under restricted "
                      "heterogeneity inapplicable");
  }
  const double ratio = in.delta / in.mu;
  return 1.0 - ratio * ratio;
}

double RoundsDgdPl(const BoundInputs& in) {
  Check(in, true);
  const double z = Zeta(in);
  const double k1 = static_cast<double>(in.K) + 1.0;
  const double gap = 1.0 - in.rho;
  return (in.L / (in.mu * k1 * z) + 1.0 / gap +
          (in.beta + in.rho * in.rho * in.L) / (in.mu * gap * gap * z * z)) *
         LogInvMuEps(in);
}

double RoundsDgdLeastSquares(const BoundInputs& in) {
  Check(in, true);
  const double k1 = static_cast<double>(in.K) + 1.0;
  return (in.L / (in.mu * k1) + in.delta * in.delta / (in.mu * in.mu * (1.0 - in.rho))) *
         std::log(1.0 / in.epsilon);
}

double RoundsDgtLeastSquares(const BoundInputs& in) {
  Check(in, true);
  return DgtFactor(in, in.delta) * std::log(1.0 / in.epsilon);
}

std::size_t OptimalLocalUpdates(const BoundInputs& in) {
  Check(in, false);
  const double denom = in.rho * (in.L - in.mu) + in.delta + in.mu;
  if (!(denom > 0.0)) throw DomainError("K* denominator must be positive");
  const double gap = 1.0 - in.rho;
  const double value = std::floor(in.L * gap * gap / denom);
  if (!(value > 0.0)) return 0;
  if (!std::isfinite(value)) throw DomainError("K* is unbounded");
  return static_cast<std::size_t>(value);
}

}  // namespace localgt
