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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liomsim/model.hpp"
#include "liomsim/truncation.hpp"

namespace liomsim {

struct DenseState {
  int n_sites = 0;
  Vector amplitudes;  // site 1 most significant
};

struct OutcomeDistribution {
  int n_sites = 0;
  std::vector<double> probabilities;  // indexed like DenseState

  double operator[](std::size_t index) const { return probabilities[index]; }
  double total() const;
};

// Bitstring for a basis index, site 1 first.
std::string bitstring(int n_sites, std::size_t index);
std::size_t basis_index(const std::string& bits);

// e^{-iHt}|0...0> on the full state vector, H truncated when radii are
// given. Computed as U e^{-iDt} U^dag |0...0> with D diagonal.
DenseState exact_state(const MblInstance& instance, double t,
                       const std::optional<TruncationRadii>& radii);
// e^{-iHt}|0...0> for an arbitrary Hermitian H by eigendecomposition.
DenseState evolve_dense(const Matrix& hamiltonian, double t, int n_sites);

OutcomeDistribution exact_distribution(const MblInstance& instance, double t,
                                       const std::optional<TruncationRadii>& radii);
OutcomeDistribution distribution_of(const DenseState& state);

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b);

// Largest singular value via power iteration on M^dag M.
double operator_norm(const Matrix& m, double rel_tol = 1e-8, int max_iter = 20000);
double operator_norm_serial(const Matrix& m, double rel_tol = 1e-8, int max_iter = 20000);

// Largest |eigenvalue| of a Hermitian matrix by full eigensolve.
double hermitian_norm(const Matrix& h);

}  // namespace liomsim
