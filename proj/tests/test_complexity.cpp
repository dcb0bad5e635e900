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

#include "liomsim/complexity.hpp"
#include "liomsim/errors.hpp"

using namespace liomsim;

TEST(Complexity, ReferencePoint) {
  const ComplexityReport r = circuit_complexity_bound({16, 1e3, 0.15, 0.1, 1.0});
  ASSERT_TRUE(r.feasible) << r.reason;
  EXPECT_TRUE(std::isfinite(r.total_bound));
  EXPECT_LT(r.ledger.total(), 0.1);
  EXPECT_GE(r.r_J, r.formula_r_J);
  EXPECT_GE(r.r_U, r.formula_r_U);
  EXPECT_DOUBLE_EQ(r.total_bound, 2 * r.c_U_bound + r.c_H_bound);
}

TEST(Complexity, SublinearGrowth) {
  for (double t : {1e2, 1e4, 1e6}) {
    const double a = circuit_complexity_bound({16, t, 0.15, 0.1, 1.0}).total_bound;
    const double b = circuit_complexity_bound({16, 10 * t, 0.15, 0.1, 1.0}).total_bound;
    EXPECT_LT(b / a, 10.0) << t;
  }
}

TEST(Complexity, Infeasible) {
  const ComplexityReport r = circuit_complexity_bound({16, 1e3, 0.5, 0.1, 1.0});
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.reason.empty());
  EXPECT_NEAR(complexity_xi_limit(), 1 / (4.04 * std::log(2.0)), 1e-15);
}

TEST(Complexity, QueryValidation) {
  EXPECT_THROW(circuit_complexity_bound({0, 1.0, 0.15, 0.1, 1.0}), DomainError);
  EXPECT_THROW(circuit_complexity_bound({4, -1.0, 0.15, 0.1, 1.0}), DomainError);
  EXPECT_THROW(circuit_complexity_bound({4, 1.0, 0.15, 0.0, 1.0}), DomainError);
}

TEST(Synthesis, ExactAndCap) {
  const SynthesisError one = u_synthesis_error(5, 1, 1e-3);
  EXPECT_NEAR(one.exact, 4 * 5 * 1e-3, 1e-15);
  EXPECT_NEAR(one.cap, 8 * 5 * 1e-3, 1e-15);
  for (int r = 1; r <= 40; ++r) {
    const SynthesisError s = u_synthesis_error(7, r, 1e-9);
    EXPECT_GE(s.cap / s.exact, 1.0) << r;
  }
  EXPECT_EQ(u_synthesis_error(7, 4, 0.0).exact, 0.0);
}

TEST(Exponents, Values) {
  EXPECT_NEAR(sublinearity_exponents(0.15).first, 2.02 * 0.15 * std::log(4.0), 1e-14);
  EXPECT_NEAR(sublinearity_exponents(complexity_xi_limit()).first, 1.0, 1e-12);
  for (double xi = 0.01; xi <= complexity_xi_limit(); xi += 0.01) {
    const auto [eu, eh] = sublinearity_exponents(xi);
    if (eu <= 1.0) EXPECT_LT(eh, 1.0) << xi;
  }
}

TEST(Exponents, SlopeBelowOne) {
  std::vector<double> times;
  for (int i = 0; i <= 12; ++i) times.push_back(std::pow(10.0, 2 + i * 0.5));
  const double slope = loglog_slope({16, 1.0, 0.15, 0.1, 1.0}, times);
  EXPECT_GT(slope, 0.0);
  EXPECT_LT(slope, 1.0);
}
