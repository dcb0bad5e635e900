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

#include <vector>

#include "liomsim/errors.hpp"
#include "liomsim/kernels.hpp"
#include "liomsim/rng.hpp"

using namespace liomsim;

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  Rng a(7, {1, 2}), b(7, {1, 2}), c(7, {1, 3});
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
  }
}

TEST(Rng, UnitIntervalRange) {
  EXPECT_EQ(to_unit(0), 0.0);
  EXPECT_LT(to_unit(~std::uint64_t{0}), 1.0);
  Rng r(3);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) sum += r.uniform();
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(Rng, HashWordsSpanMatchesList) {
  const std::vector<std::uint64_t> w{4, 5, 6};
  EXPECT_EQ(hash_words(9, w), hash_words(9, {4, 5, 6}));
  EXPECT_NE(hash_words(9, {4, 5, 6}), hash_words(9, {4, 6, 5}));
}

namespace {

Matrix random_unitary(int w, std::uint64_t seed) {
  Rng r(seed);
  const Eigen::Index d = Eigen::Index{1} << w;
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(r.normal(), r.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

}  // namespace

TEST(Kernels, ApplyBlockMatchesKronProduct) {
  const int n = 5;
  const Matrix gate = random_unitary(2, 11);
  Vector state = Vector::Zero(32);
  Rng r(2);
  for (auto& x : state) x = cplx(r.normal(), r.normal());
  // sites 2..3 of 5: I_2 (x) gate (x) I_4
  const Matrix full = kron(kron(Matrix::Identity(2, 2), gate), Matrix::Identity(4, 4));
  const Vector expected = full * state;
  Vector got = state;
  apply_block(got, n, 2, gate);
  EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(Kernels, ParallelMatchesSerial) {
  const int n = 10;
  const std::size_t cols = 3;
  Matrix states(1 << n, cols);
  Rng r(5);
  for (Eigen::Index i = 0; i < states.size(); ++i) states.data()[i] = cplx(r.normal(), r.normal());
  for (int first = 1; first <= n - 2; first += 3) {
    const Matrix gate = random_unitary(3, 100 + first);
    Matrix a = states, b = states;
    apply_block(a.data(), cols, n, first, gate);
    apply_block_serial(b.data(), cols, n, first, gate);
    EXPECT_EQ(a, b) << "first site " << first;
  }
  std::vector<cplx> diag(1 << n);
  for (auto& d : diag) d = std::polar(1.0, r.uniform());
  Matrix a = states, b = states;
  apply_diagonal(a.data(), cols, diag.size(), diag.data());
  apply_diagonal_serial(b.data(), cols, diag.size(), diag.data());
  EXPECT_EQ(a, b);
}

TEST(Kernels, ExpiHermitianOfPauliX) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Matrix u = expi_hermitian(x, 0.3);
  EXPECT_NEAR(std::abs(u(0, 0) - std::cos(0.3)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(0, 1) - cplx(0, std::sin(0.3))), 0.0, 1e-14);
}

TEST(Kernels, QubitsOfDim) {
  EXPECT_EQ(qubits_of_dim(2), 1);
  EXPECT_THROW(qubits_of_dim(1), StructuralError);
  EXPECT_EQ(qubits_of_dim(16), 4);
  EXPECT_THROW(qubits_of_dim(6), StructuralError);
}
