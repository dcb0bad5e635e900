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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "liomsim/errors.hpp"
#include "liomsim/oracle.hpp"
#include "liomsim/simulate.hpp"
#include "test_support.hpp"

using namespace liomsim;
using liomsim::testing::fixture;
using liomsim::testing::hadamard;

namespace {

// <psi| prod_j P_{z_j} (x) Z_pivot |psi> from a dense state.
double dense_expectation(const DenseState& s, const std::string& prefix, int pivot) {
  const int n = s.n_sites;
  double v = 0.0;
  for (Eigen::Index z = 0; z < s.amplitudes.size(); ++z) {
    const std::string bits = bitstring(n, static_cast<std::size_t>(z));
    if (bits.compare(0, prefix.size(), prefix) != 0) continue;
    const double sign = bits[static_cast<std::size_t>(pivot - 1)] == '0' ? 1.0 : -1.0;
    v += sign * std::norm(s.amplitudes[z]);
  }
  return v;
}

}  // namespace

TEST(SiteBlocks, ZeroTimeAndPhases) {
  const MblInstance inst = build_random_instance({4, 0.5, 1.0}, 1, 4);
  for (const SiteBlock& b : site_blocks(truncate(inst, {3, 2}), 0.0))
    for (cplx p : b.phases) EXPECT_EQ(p, cplx(1.0));
  const MblInstance one = fixture(1, 0.5, {{{1}, 1.0}});
  const auto blocks = site_blocks(truncate(one, {1, 1}), std::numbers::pi);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_NEAR(std::abs(blocks[0].phases[0] + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(blocks[0].phases[1] + 1.0), 0.0, 1e-15);
}

TEST(SiteBlocks, ProductMatchesDenseEvolution) {
  const int n = 6;
  const MblInstance inst = build_random_instance({n, 0.5, 1.0}, 2, n);
  const TruncationRadii radii{3, 2};
  const double t = 1.3;
  std::vector<cplx> diag(std::size_t{1} << n, 1.0);
  const auto blocks = site_blocks(truncate(inst, radii), t);
  EXPECT_EQ(blocks.size(), static_cast<std::size_t>(n));
  for (const SiteBlock& b : blocks) {
    EXPECT_EQ(b.width, std::min(n, b.site + radii.r_J - 1) - b.site + 1);
    for (std::size_t z = 0; z < diag.size(); ++z) {
      const std::size_t local = (z >> (n - b.site - b.width + 1)) & ((std::size_t{1} << b.width) - 1);
      diag[z] *= b.phases[local];
    }
  }
  const Eigen::VectorXd e = dense_diagonal_energies(inst, radii.r_J);
  for (std::size_t z = 0; z < diag.size(); ++z)
    EXPECT_NEAR(std::abs(diag[z] - std::polar(1.0, -e[static_cast<Eigen::Index>(z)] * t)), 0.0, 1e-12);
}

TEST(Observable, Validation) {
  ObservableProduct obs;
  obs.pivot_site = 3;
  obs.projectors = {{1, 0}, {2, 1}};
  EXPECT_NO_THROW(obs.validate(4));
  EXPECT_THROW(obs.validate(2), DomainError);
  obs.projectors[3] = 0;
  EXPECT_THROW(obs.validate(4), DomainError);
  obs.projectors.erase(3);
  obs.projectors[1] = 2;
  EXPECT_THROW(obs.validate(4), DomainError);
}

TEST(Expectation, InitialStateProjector) {
  const MblInstance inst = fixture(3, 0.5, {{{1}, 0.3}});
  ObservableProduct obs;
  obs.pivot_site = 1;
  obs.pivot = Pivot::project0;
  EXPECT_NEAR(expectation({inst, 0.0, 0.05, TruncationRadii{1, 1}}, obs), 1.0, 1e-14);
}

TEST(Expectation, SingleQubitClosedForm) {
  const MblInstance inst = fixture(1, 1.0, {{{1}, 1.0}}, {{1, hadamard()}});
  ObservableProduct obs;
  obs.pivot_site = 1;
  for (double t : {std::numbers::pi / 4, 0.3, 1.1})
    EXPECT_NEAR(expectation({inst, t, 0.05, TruncationRadii{1, 1}}, obs), std::cos(2 * t), 1e-13);
}

TEST(Expectation, MatchesDenseOracle) {
  const InstanceParams p{5, 0.4, 1.0};
  const MblInstance inst = build_random_instance(p, 11, 5);
  const TruncationRadii radii{3, 2};
  const double t = 1.7;
  const DenseState trunc_state = exact_state(inst, t, radii);
  const DenseState full_state = exact_state(inst, t, std::nullopt);
  const double dh = delta_h_bound(p, radii);
  StrongSimulator sim({inst, t, 0.05, radii});
  for (const std::string prefix : {"", "0", "01", "110"}) {
    ObservableProduct obs;
    obs.pivot_site = static_cast<int>(prefix.size()) + 1;
    for (std::size_t j = 0; j < prefix.size(); ++j) obs.projectors[static_cast<int>(j) + 1] = prefix[j] - '0';
    const double v = sim.expectation(obs);
    EXPECT_NEAR(v, dense_expectation(trunc_state, prefix, obs.pivot_site), 1e-10) << prefix;
    EXPECT_LE(std::abs(v - dense_expectation(full_state, prefix, obs.pivot_site)), 2 * dh * t) << prefix;
  }
}

TEST(Expectation, RotatedMeasurement) {
  const MblInstance inst = build_random_instance({4, 0.5, 1.0}, 12, 4);
  const TruncationRadii radii{2, 2};
  const double t = 0.9;
  ObservableProduct obs;
  obs.pivot_site = 3;
  obs.projectors = {{1, 0}};
  obs.rotations[1] = hadamard();
  obs.rotations[3] = hadamard();
  // Dense: rotate the state by H on sites 1 and 3, then measure in z.
  DenseState s = exact_state(inst, t, radii);
  apply_block(s.amplitudes, 4, 1, hadamard());
  apply_block(s.amplitudes, 4, 3, hadamard());
  EXPECT_NEAR(expectation({inst, t, 0.05, radii}, obs), dense_expectation(s, "0", 3), 1e-10);
}

TEST(Conditional, IdentityUnitaryStaysAtZero) {
  const MblInstance inst = fixture(4, 0.5, {{{1}, 0.3}, {{2, 3}, 0.1}});
  StrongSimulator sim({inst, 5.0, 0.05, TruncationRadii{2, 2}});
  std::string prefix;
  for (int j = 1; j <= 4; ++j) {
    EXPECT_NEAR(sim.conditional_probability(prefix, j), 1.0, 1e-12);
    prefix += '0';
  }
}

TEST(Conditional, ChainRuleMatchesOracle) {
  const MblInstance inst = build_random_instance({2, 0.5, 1.0}, 5, 2);
  const TruncationRadii radii{2, 2};
  const OutcomeDistribution d = exact_distribution(inst, 1.4, radii);
  StrongSimulator sim({inst, 1.4, 0.05, radii});
  for (std::size_t z = 0; z < 4; ++z) {
    const std::string bits = bitstring(2, z);
    const double p1 = sim.conditional_probability("", 1);
    const double q1 = bits[0] == '0' ? p1 : 1 - p1;
    const double p2 = sim.conditional_probability(bits.substr(0, 1), 2);
    const double q2 = bits[1] == '0' ? p2 : 1 - p2;
    EXPECT_NEAR(q1 * q2, d[z], 1e-12);
  }
}

TEST(Conditional, BranchesSumToOne) {
  const MblInstance inst = build_random_instance({4, 0.5, 1.0}, 6, 4);
  StrongSimulator sim({inst, 2.0, 0.05, TruncationRadii{3, 2}});
  const double m = sim.prefix_marginal("01");
  EXPECT_NEAR(sim.prefix_marginal("010") + sim.prefix_marginal("011"), m, 1e-9);
  EXPECT_THROW(sim.conditional_probability("0", 3), DomainError);
}

TEST(Simulator, DefaultRadii) {
  const MblInstance inst = build_random_instance({4, 0.3, 1.0}, 7, 4);
  EXPECT_EQ(StrongSimulator({inst, 0.0, 0.05, std::nullopt}).truncated().radii(), (TruncationRadii{1, 1}));
  const StrongSimulator sim({inst, 1.0, 0.05, std::nullopt});
  EXPECT_EQ(sim.truncated().radii(), select_radii(inst.params(), 0.05, 1.0).radii);
}

TEST(Sampler, IdentityUnitaryPointMass) {
  const MblInstance inst = fixture(3, 0.5, {{{1}, 0.3}});
  for (const auto& r : sample({inst, 2.0, 0.05, TruncationRadii{1, 1}}, 20, 3)) EXPECT_EQ(r.bits, "000");
}

TEST(Sampler, SeededAndConcentrated) {
  const MblInstance inst = build_random_instance({3, 0.5, 1.0}, 8, 3);
  const TruncationRadii radii{2, 2};
  const SimulationRequest req{inst, 1.5, 0.05, radii};
  const auto a = sample(req, 20000, 99), b = sample(req, 20000, 99);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].bits, b[i].bits);
    EXPECT_EQ(a[i].index, i);
  }
  const OutcomeDistribution d = exact_distribution(inst, 1.5, radii);
  OutcomeDistribution emp{3, std::vector<double>(8, 0.0)};
  for (const auto& r : a) emp.probabilities[basis_index(r.bits)] += 1.0 / 20000;
  EXPECT_LE(total_variation(emp, d), 0.03);
}
