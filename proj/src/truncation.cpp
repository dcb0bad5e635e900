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

#include "liomsim/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liomsim/errors.hpp"

namespace liomsim {

namespace {

void check_xi(double xi) {
  if (!(xi > 0.0) || !(xi < xi_limit())) throw DomainError("bound requires 0 < xi < 1/ln 2");
}

}  // namespace

void TruncationRadii::validate(int n_sites) const {
  if (r_J < 1 || r_J > n_sites) throw DomainError("r_J must lie in [1, N]");
  if (r_U < 1 || r_U > n_sites) throw DomainError("r_U must lie in [1, N]");
}

BoundConstants BoundConstants::from(double xi, double q) {
  check_xi(xi);
  BoundConstants b;
  b.xi = xi;
  b.q = q;
  b.a = std::log(std::expm1(1.0 / xi));
  b.kappa = 1.0 / xi - std::numbers::ln2;
  b.k_min = std::min(b.kappa, b.a);
  b.c1 = 1.0 / (2.0 * (1.0 - std::exp(-b.kappa)));
  const double x = std::exp(-b.a);
  b.c2 = b.big_c / ((1.0 - x) * (1.0 - x));
  b.c_J = b.c1 + b.c2;
  // sum_{p>=1} (p + 2) p x^p in closed form.
  const double series = x * (1.0 + x) / std::pow(1.0 - x, 3) + 2.0 * x / ((1.0 - x) * (1.0 - x));
  // Single-site LIOM terms contribute the leading 1; the p = 0 tail S_{0,0}
  // is bounded by C, hence the 2C.
  b.c_U = 8.0 * std::sqrt(q) * (1.0 + b.big_c * std::exp(-1.0 / xi) * (2.0 + series));
  return b;
}

double BoundConstants::n_star(int p) const { return p / (1.0 - std::exp(-1.0 / xi)); }

double spn0_bound(int p, int n0, double xi) {
  check_xi(xi);
  if (p < 0) throw DomainError("p must be >= 0");
  if (n0 < p) throw DomainError("n0 must be >= p");
  const BoundConstants b = BoundConstants::from(xi, 1.0);
  if (p == 0) return b.big_c * std::exp(-n0 / xi);
  if (n0 < b.n_star(p)) return b.big_c * p * std::exp(-b.a * p);
  const double log_v = std::log(b.big_c) + (p + 1) * std::log(static_cast<double>(n0)) +
                       0.5 * std::log(static_cast<double>(p)) - std::lgamma(p + 1.0) - n0 / xi;
  return std::exp(log_v);
}

double spn0_aggregate_bound(int x1, int x2, int n0, double xi) {
  check_xi(xi);
  if (x1 < 0 || x1 > x2 || x2 > n0) throw DomainError("aggregate bound needs 0 <= x1 <= x2 <= n0");
  const double kappa = 1.0 / xi - std::numbers::ln2;
  return std::exp(-kappa * n0) / (1.0 - std::exp(-kappa));
}

double liom_deviation_bound(const InstanceParams& params, int r_U) {
  check_xi(params.xi);
  if (r_U < 0) throw DomainError("r_U must be >= 0");
  return 8.0 * std::sqrt(params.q) * params.n_sites * std::exp(-r_U / (2.0 * params.xi));
}

DeltaHTerms delta_h_terms(const InstanceParams& params, const TruncationRadii& radii) {
  const BoundConstants b = BoundConstants::from(params.xi, params.q);
  if (radii.r_J < 1 || radii.r_U < 1) throw DomainError("radii must be >= 1");
  const double n = params.n_sites;
  DeltaHTerms d;
  d.term_J = b.c_J * n * radii.r_J * std::exp(-b.k_min * radii.r_J);
  d.term_U = b.c_U * n * n * std::exp(-radii.r_U / (2.0 * params.xi));
  return d;
}

double delta_h_bound(const InstanceParams& params, const TruncationRadii& radii) {
  return delta_h_terms(params, radii).total();
}

RadiiSelection select_radii(const InstanceParams& params, double epsilon, double t) {
  params.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
  const int N = params.n_sites;
  RadiiSelection sel;
  sel.budget = epsilon / (2.0 * t);
  auto first_meeting = [&](auto term) {
    for (int r = 1; r <= N; ++r)
      if (term(r) <= sel.budget) return r;
    sel.saturated = true;
    return N;
  };
  sel.radii.r_J = first_meeting([&](int r) { return delta_h_terms(params, {r, 1}).term_J; });
  sel.radii.r_U = first_meeting([&](int r) { return delta_h_terms(params, {1, r}).term_U; });
  sel.achieved = delta_h_terms(params, sel.radii);
  return sel;
}

TruncatedInstance::TruncatedInstance(const MblInstance& base, TruncationRadii radii)
    : base_(base),
      truncated_(
          base.params(),
          [couplings = base.coupling_oracle(), rj = radii.r_J](const CouplingIndex& idx) {
            return idx.range() >= rj ? 0.0 : couplings(idx);
          },
          [constituents = base.constituent_oracle(), ru = radii.r_U](int k, int n) {
            return n > ru ? Constituent::make_identity(k, n) : constituents(k, n);
          },
          base.label() + " truncated r_J=" + std::to_string(radii.r_J) +
              " r_U=" + std::to_string(radii.r_U)),
      radii_(radii),
      bound_(0.0) {
  radii_.validate(base.n_sites());
  bound_ = liomsim::delta_h_bound(base.params(), radii_);
}

TruncatedInstance truncate(const MblInstance& instance, const TruncationRadii& radii) {
  return TruncatedInstance(instance, radii);
}

}  // namespace liomsim
