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

#include "liomsim/errors.hpp"
#include "liomsim/rng.hpp"
#include "liomsim/simulate.hpp"
#include "liomsim/tensor.hpp"
#include "test_support.hpp"

using namespace liomsim;

namespace {

Leg in(int site, int slice) { return {site, slice, Side::in}; }
Leg out(int site, int slice) { return {site, slice, Side::out}; }

DenseTensor random_tensor(std::vector<Leg> legs, Rng& r) {
  std::vector<cplx> data(std::size_t{1} << legs.size());
  for (auto& x : data) x = cplx(r.normal(), r.normal());
  return DenseTensor(std::move(legs), std::move(data));
}

}  // namespace

TEST(Contract, IdentityWithIdentity) {
  const Matrix id = Matrix::Identity(2, 2);
  const DenseTensor a = DenseTensor::from_operator(id, {out(1, 1)}, {in(1, 0)});
  const DenseTensor b = DenseTensor::from_operator(id, {out(1, 2)}, {in(1, 1)});
  const DenseTensor c = contract(a, b, {{out(1, 1), in(1, 1)}});
  ASSERT_EQ(c.rank(), 2);
  EXPECT_EQ(c.legs()[0], in(1, 0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(c.at({i, j}), cplx(i == j ? 1.0 : 0.0));
}

TEST(Contract, HadamardOnZero) {
  const DenseTensor ket({out(1, 0)}, {1.0, 0.0});
  const DenseTensor h = DenseTensor::from_operator(liomsim::testing::hadamard(), {out(1, 1)}, {in(1, 0)});
  const DenseTensor v = contract(ket, h, {{out(1, 0), in(1, 0)}});
  EXPECT_NEAR(std::abs(v.at({0}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.at({1}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Contract, MatchesLoopSummation) {
  Rng r(1);
  const DenseTensor a = random_tensor({in(1, 0), out(2, 1), in(3, 0)}, r);
  const DenseTensor b = random_tensor({in(4, 0), in(2, 1), out(5, 1)}, r);
  const DenseTensor c = contract(a, b, {{out(2, 1), in(2, 1)}});
  ASSERT_EQ(c.rank(), 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) {
          cplx s = 0.0;
          for (int j = 0; j < 2; ++j) s += a.at({i, j, k}) * b.at({l, j, m});
          EXPECT_NEAR(std::abs(c.at({i, k, l, m}) - s), 0.0, 1e-13);
        }
}

TEST(Contract, DiagonalMatchesExpanded) {
  Rng r(2);
  std::vector<cplx> diag(8);
  for (auto& x : diag) x = std::polar(1.0, r.uniform() * 6.0);
  const DenseTensor d = DenseTensor::diagonal({out(1, 2), out(2, 2), out(3, 2)},
                                              {in(1, 1), in(2, 1), in(3, 1)}, diag);
  EXPECT_TRUE(d.is_diagonal());
  EXPECT_EQ(d.variables(), 3);
  const DenseTensor e = d.expanded();
  EXPECT_EQ(e.rank(), 6);
  const DenseTensor x = random_tensor({out(1, 1), out(2, 1), in(7, 0), out(3, 1)}, r);
  const LegPairs pairs{{out(1, 1), in(1, 1)}, {out(3, 1), in(3, 1)}};
  const DenseTensor c1 = contract(x, d, pairs);
  const DenseTensor c2 = contract(x, e, pairs);
  ASSERT_EQ(c1.legs(), c2.legs());
  const DenseTensor c1e = c1.expanded();
  for (std::size_t i = 0; i < c1e.data().size(); ++i)
    EXPECT_NEAR(std::abs(c1e.data()[i] - c2.data()[i]), 0.0, 1e-13);
}

TEST(Contract, ParallelMatchesSerialBitwise) {
  Rng r(3);
  std::vector<Leg> la, lb;
  for (int s = 1; s <= 10; ++s) la.push_back(out(s, 1));
  for (int s = 6; s <= 10; ++s) lb.push_back(in(s, 1));
  for (int s = 11; s <= 14; ++s) lb.push_back(out(s, 1));
  const DenseTensor a = random_tensor(la, r), b = random_tensor(lb, r);
  LegPairs pairs;
  for (int s = 6; s <= 10; ++s) pairs.push_back({out(s, 1), in(s, 1)});
  EXPECT_EQ(contract(a, b, pairs).data(), contract_serial(a, b, pairs).data());
}

TEST(Contract, Errors) {
  Rng r(4);
  const DenseTensor a = random_tensor({out(1, 1), out(2, 1)}, r);
  const DenseTensor b = random_tensor({in(1, 1), in(3, 1)}, r);
  EXPECT_THROW(contract(a, b, {{out(3, 1), in(3, 1)}}), StructuralError);
  EXPECT_THROW(contract(a, b, {{out(1, 1), in(1, 1)}}, 1), ContractionTooWide);
  EXPECT_THROW(DenseTensor({out(1, 1)}, {1.0}), StructuralError);
  EXPECT_THROW(DenseTensor({out(1, 1), out(1, 1)}, std::vector<cplx>(4)), StructuralError);
}

TEST(Network, TrivialSingleSite) {
  TensorNetwork net;
  net.add(DenseTensor({out(1, 0)}, {1.0, 0.0}), "ket");
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  net.add(DenseTensor::from_operator(p0, {out(1, 1)}, {in(1, 0)}), "P0");
  net.add(DenseTensor({in(1, 1)}, {1.0, 0.0}), "bra");
  net.validate_closed();
  const ContractionPlan plan = qubitwise_schedule(net);
  EXPECT_NEAR(std::abs(execute(plan, net).value - 1.0), 0.0, 1e-15);
}

TEST(Network, OpenLegIsStructuralError) {
  TensorNetwork net;
  net.add(DenseTensor({out(1, 0)}, {1.0, 0.0}));
  EXPECT_THROW(net.validate_closed(), StructuralError);
}

TEST(Schedule, LegBoundAtEightSites) {
  const MblInstance inst = build_random_instance({8, 0.5, 1.0}, 1, 6);
  const TruncatedInstance tr = truncate(inst, {3, 3});
  ObservableProduct obs;
  obs.pivot_site = 8;
  for (int j = 1; j < 8; ++j) obs.projectors[j] = j % 2;
  const TensorNetwork net = build_expectation_network(tr, 1.0, obs, {false, true});
  const ContractionPlan plan = qubitwise_schedule(net);
  EXPECT_EQ(skyline_leg_bound(3, 3), 56);
  EXPECT_LE(plan.peak_legs, 56);
  for (const auto& s : plan.steps) EXPECT_LE(s.predicted_legs, 56);
}

TEST(Schedule, PlanDependsOnStructureOnly) {
  const MblInstance inst = build_random_instance({5, 0.5, 1.0}, 2, 5);
  const TruncatedInstance tr = truncate(inst, {3, 2});
  ObservableProduct obs;
  obs.pivot_site = 4;
  obs.projectors = {{1, 0}, {2, 1}, {3, 0}};
  const TensorNetwork data = build_expectation_network(tr, 0.7, obs);
  const TensorNetwork shape = build_expectation_network(tr, 0.7, obs, {true, true});
  ASSERT_TRUE(data.has_data());
  ASSERT_FALSE(shape.has_data());
  const ContractionPlan a = qubitwise_schedule(data), b = qubitwise_schedule(shape);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].lhs, b.steps[i].lhs);
    EXPECT_EQ(a.steps[i].rhs, b.steps[i].rhs);
    EXPECT_EQ(a.steps[i].predicted_legs, b.steps[i].predicted_legs);
  }
  EXPECT_THROW(execute(b, shape), StructuralError);
}

TEST(Execute, NormalizationAndDeterminism) {
  const MblInstance inst = build_random_instance({5, 0.5, 1.0}, 3, 5);
  const TruncatedInstance tr = truncate(inst, {3, 2});
  ObservableProduct obs;
  obs.pivot_site = 5;
  obs.pivot = Pivot::none;
  const TensorNetwork net = build_expectation_network(tr, 2.0, obs, {false, false});
  const ContractionPlan plan = qubitwise_schedule(net);
  const ExecutionResult r1 = execute(plan, net), r2 = execute(plan, net);
  EXPECT_NEAR(std::abs(r1.value - 1.0), 0.0, 1e-12);
  EXPECT_EQ(r1.value, r2.value);
  ExecuteOptions serial;
  serial.serial = true;
  EXPECT_EQ(execute(plan, net, serial).value, r1.value);
  ExecuteOptions tight;
  tight.leg_bound = 1;
  EXPECT_THROW(execute(plan, net, tight), StructuralError);
}
