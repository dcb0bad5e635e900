// Copyright 2026 The liomsim Authors
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

#include "liomsim/complexity.hpp"

#include <cmath>
#include <numbers>

#include "liomsim/errors.hpp"
#include "liomsim/model.hpp"
#include "liomsim/truncation.hpp"

namespace liomsim {

namespace {

constexpr int kMaxRadius = 4096;

double synthesis_delta(double eps, int n, int r) {
  return eps / (12.0 * n * r * r * std::pow(4.0, r));
}

}  // namespace

void ComplexityQuery::validate() const {
  if (n_sites < 1) throw DomainError("n_sites must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("xi must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
}

double complexity_xi_limit() { return 1.0 / (4.04 * std::numbers::ln2); }

ComplexityReport circuit_complexity_bound(const ComplexityQuery& query) {
  query.validate();
  ComplexityReport r;
  if (!(query.xi < complexity_xi_limit())) {
    r.reason = "infeasible: the radius choices need xi < 1/(4.04 ln 2) ~ 0.3571, got xi=" +
               std::to_string(query.xi);
    return r;
  }
  const double N = query.n_sites;
  const InstanceParams params{query.n_sites, query.xi, query.q};
  const BoundConstants b = BoundConstants::from(query.xi, query.q);

  r.formula_r_J = std::max(1, static_cast<int>(std::ceil(1.01 * std::log(N * query.t) / b.k_min)));
  r.formula_r_U = std::max(1, static_cast<int>(std::ceil(2.02 * query.xi * std::log(N * N * query.t))));

  // The formula radii only meet the ledger asymptotically; raise each until
  // its truncation term is below eps/4.
  const double quarter = query.epsilon / 4.0;
  r.r_J = r.formula_r_J;
  while (delta_h_terms(params, {r.r_J, 1}).term_J * query.t >= quarter) {
    if (++r.r_J > kMaxRadius) throw DomainError("r_J search exceeded its cap");
  }
  r.r_U = r.formula_r_U;
  while (delta_h_terms(params, {1, r.r_U}).term_U * query.t >= quarter) {
    if (++r.r_U > kMaxRadius) throw DomainError("r_U search exceeded its cap");
  }

  r.delta_U = synthesis_delta(query.epsilon, query.n_sites, r.r_U);
  r.delta_J = synthesis_delta(query.epsilon, query.n_sites, r.r_J);

  double series = 1.0;  // k = 1 term carries no 4^k factor
  for (int k = 2; k <= r.r_U; ++k) series += static_cast<double>(k) * k * std::pow(4.0, k);
  r.c_U_bound = N * std::log(1.0 / r.delta_U) * series;
  r.c_H_bound = N * std::log(1.0 / r.delta_J) * r.r_J * r.r_J * std::pow(4.0, r.r_J);
  r.total_bound = 2.0 * r.c_U_bound + r.c_H_bound;

  const DeltaHTerms terms = delta_h_terms(params, {r.r_J, r.r_U});
  r.ledger.u_synthesis = u_synthesis_error(query.n_sites, r.r_U, r.delta_U).exact;
  r.ledger.h_synthesis = 2.0 * N * r.delta_J * r.r_J * r.r_J * std::pow(4.0, r.r_J);
  r.ledger.truncation_J = terms.term_J * query.t;
  r.ledger.truncation_U = terms.term_U * query.t;
  r.feasible = r.ledger.total() < query.epsilon;
  if (!r.feasible) r.reason = "error ledger exceeds epsilon";
  return r;
}

SynthesisError u_synthesis_error(int n_sites, int r_U, double delta) {
  if (n_sites < 1 || r_U < 1 || !(delta >= 0.0)) throw DomainError("u_synthesis_error needs positive arguments");
  const double r = r_U;
  const double p = std::pow(4.0, r);
  SynthesisError e;
  e.exact = n_sites * delta * (4.0 / 27.0) * ((9.0 * r * r - 6.0 * r + 5.0) * p - 5.0);
  e.cap = 2.0 * n_sites * delta * r * r * p;
  return e;
}

std::pair<double, double> sublinearity_exponents(double xi, double k_min) {
  if (!(k_min > 0.0)) throw DomainError("k_min must be positive");
  const double ln4 = 2.0 * std::numbers::ln2;
  return {2.02 * xi * ln4, 1.01 * ln4 / k_min};
}

std::pair<double, double> sublinearity_exponents(double xi) {
  return sublinearity_exponents(xi, BoundConstants::from(xi, 1.0).k_min);
}

double loglog_slope(const ComplexityQuery& base, const std::vector<double>& times) {
  if (times.size() < 2) throw DomainError("slope fit needs at least two times");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : times) {
    ComplexityQuery q = base;
    q.t = t;
    const ComplexityReport r = circuit_complexity_bound(q);
    if (!r.feasible) throw DomainError("slope fit hit an infeasible point: " + r.reason);
    const double x = std::log(t), y = std::log(r.total_bound);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = static_cast<double>(times.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace liomsim
