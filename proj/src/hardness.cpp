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

#include "liomsim/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "liomsim/errors.hpp"
#include "liomsim/oracle.hpp"
#include "liomsim/rng.hpp"

namespace liomsim {

namespace {

constexpr std::uint64_t kFieldStream = 0x6669656c64ULL;

Matrix hadamard() {
  Matrix h(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  h << s, s, s, -s;
  return h;
}

std::vector<std::pair<std::size_t, cplx>> leading(const Vector& v, std::size_t count) {
  std::vector<std::pair<std::size_t, cplx>> all;
  for (Eigen::Index i = 0; i < v.size(); ++i) all.emplace_back(static_cast<std::size_t>(i), v(i));
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
  all.resize(std::min(count, all.size()));
  return all;
}

}  // namespace

void HardnessSpec::validate() const {
  if (rows < 1 || cols < 1) throw DomainError("grid shape must have rows, cols >= 1");
  if (!(xi > 0.0) || !(xi < xi_limit())) throw DomainError("xi must satisfy 0 < xi < 1/ln 2");
}

HardnessSpec square_spec(int n_sites, double xi, std::uint64_t field_seed) {
  if (n_sites < 1) throw DomainError("N must be >= 1");
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_sites))));
  if (side * side != n_sites) throw DomainError("N=" + std::to_string(n_sites) + " is not a perfect square");
  return {side, side, xi, field_seed};
}

HardnessInstance build_iqp_instance(const HardnessSpec& spec) {
  spec.validate();
  const int N = spec.n_sites();
  const double scale = std::exp(-spec.cols / spec.xi);

  std::vector<double> reps(static_cast<std::size_t>(N));
  std::vector<double> fields(static_cast<std::size_t>(N));
  for (int i = 1; i <= N; ++i) {
    const double u = to_unit(hash_words(spec.field_seed, {kFieldStream, static_cast<std::uint64_t>(i)}));
    reps[static_cast<std::size_t>(i - 1)] = u < 0.5 ? 1.0 : 1.5;
    fields[static_cast<std::size_t>(i - 1)] = reps[static_cast<std::size_t>(i - 1)] * scale;
  }
  std::vector<std::pair<int, int>> layout, edges;
  for (int i = 1; i <= N; ++i) {
    layout.emplace_back((i - 1) / spec.cols, (i - 1) % spec.cols);
    if (i % spec.cols != 0) edges.emplace_back(i, i + 1);
    if (i + spec.cols <= N) edges.emplace_back(i, i + spec.cols);
  }
  std::sort(edges.begin(), edges.end());
  const double J = -scale;

  std::set<std::pair<int, int>> edge_set(edges.begin(), edges.end());
  CouplingOracle couplings = [fields, edge_set, J](const CouplingIndex& idx) -> double {
    if (idx.order() == 1) return fields[static_cast<std::size_t>(idx.first() - 1)];
    if (idx.order() == 2) return edge_set.count({idx.first(), idx.last()}) ? J : 0.0;
    return 0.0;
  };
  ConstituentOracle constituents = [](int k, int n) -> Constituent {
    if (n != 1) return Constituent::make_identity(k, n);
    Constituent c;
    c.start = k;
    c.width = 1;
    c.identity = false;
    c.factors.push_back({k, hadamard()});
    return c;
  };
  InstanceParams params{N, spec.xi, 4.0};
  MblInstance base(params, std::move(couplings), std::move(constituents),
                   "iqp2d " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols));
  return {std::move(base), spec, J, std::move(fields), std::move(reps), std::move(layout), std::move(edges)};
}

double hardness_time(int n_sites, double xi) {
  if (n_sites < 1) throw DomainError("N must be >= 1");
  if (!(xi > 0.0)) throw DomainError("xi must be positive");
  return std::numbers::pi * std::exp(std::sqrt(static_cast<double>(n_sites)) / xi) / 4.0;
}

double hardness_time(const HardnessSpec& spec) {
  spec.validate();
  return std::numbers::pi * std::exp(spec.cols / spec.xi) / 4.0;
}

MappingReport verify_2d_mapping(const HardnessSpec& spec, double tolerance,
                                const std::optional<FieldPerturbation>& perturb) {
  const HardnessInstance target = build_iqp_instance(spec);
  const int N = spec.n_sites();
  check_dense_feasible(N);
  if (!(tolerance >= 0.0 && tolerance < 1.0)) throw DomainError("tolerance must lie in [0, 1)");

  // The evolved 1D chain, optionally with one field moved off {1, 3/2}.
  const MblInstance* chain = &target.base;
  std::optional<MblInstance> perturbed;
  if (perturb) {
    if (perturb->site < 1 || perturb->site > N) throw DomainError("perturbed site outside [1, N]");
    const double shift = perturb->representative_shift * std::exp(-spec.cols / spec.xi);
    perturbed.emplace(
        target.base.params(),
        [orig = target.base.coupling_oracle(), site = perturb->site, shift](const CouplingIndex& idx) {
          const double v = orig(idx);
          return idx.order() == 1 && idx.first() == site ? v + shift : v;
        },
        target.base.constituent_oracle(), target.base.label() + " perturbed");
    chain = &*perturbed;
  }
  const double t = hardness_time(spec);
  Vector psi1 = exact_state(*chain, t, std::nullopt).amplitudes;
  for (int s = 1; s <= N; ++s) apply_block(psi1, N, s, hadamard());

  const std::size_t dim = std::size_t{1} << N;
  Vector psi2(static_cast<Eigen::Index>(dim));
  const double amp = std::pow(2.0, -0.5 * N);
  const double quarter = std::numbers::pi / 4.0;
  for (std::size_t z = 0; z < dim; ++z) {
    auto spin = [&](int s) { return (z >> site_bit(N, s) & 1U) ? -1.0 : 1.0; };
    double e = 0.0;
    for (auto [i, j] : target.edges) e -= quarter * spin(i) * spin(j);
    for (int i = 1; i <= N; ++i) e += quarter * target.representatives[static_cast<std::size_t>(i - 1)] * spin(i);
    psi2(static_cast<Eigen::Index>(z)) = std::polar(amp, -e);
  }

  MappingReport r;
  r.n_sites = N;
  r.time = t;
  r.tolerance = tolerance;
  r.fidelity = std::norm(psi2.dot(psi1));
  r.ok = r.fidelity >= 1.0 - tolerance;
  r.leading_1d = leading(psi1, 4);
  r.leading_2d = leading(psi2, 4);
  return r;
}

}  // namespace liomsim
