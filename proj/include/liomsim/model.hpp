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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liomsim/kernels.hpp"

namespace liomsim {

struct InstanceParams {
  int n_sites = 1;
  double xi = 0.5;
  double q = 1.0;

  // Throws DomainError naming the violated invariant.
  void validate() const;
};

// Largest admissible localization length (exclusive).
double xi_limit();

class CouplingIndex {
 public:
  CouplingIndex() = default;
  // Sites must be strictly increasing and >= 1.
  explicit CouplingIndex(std::vector<int> sites);

  const std::vector<int>& sites() const { return sites_; }
  int order() const { return static_cast<int>(sites_.size()); }
  int first() const { return sites_.front(); }
  int last() const { return sites_.back(); }
  int range() const { return sites_.back() - sites_.front(); }

  bool operator==(const CouplingIndex&) const = default;

 private:
  std::vector<int> sites_;
};

using CouplingOracle = std::function<double(const CouplingIndex&)>;

// A unitary on a contiguous run of sites.
struct Block {
  int first_site = 1;
  Matrix matrix;
  int width() const { return qubits_of_dim(matrix.rows()); }
};

// U_k^(n). A wrapping constituent (k + n - 1 > N) is stored as two blocks:
// sites k..N and sites 1..k+n-1-N. Identity constituents carry no blocks.
struct Constituent {
  int start = 1;
  int width = 1;
  bool identity = true;
  std::vector<Block> factors;

  static Constituent make_identity(int k, int n);
  // Full 2^n x 2^n matrix with site k as the most significant qubit.
  Matrix matrix() const;
};

using ConstituentOracle = std::function<Constituent(int k, int n)>;

class MblInstance {
 public:
  MblInstance(InstanceParams params, CouplingOracle couplings, ConstituentOracle constituents,
              std::string label = {});

  const InstanceParams& params() const { return params_; }
  int n_sites() const { return params_.n_sites; }
  const std::string& label() const { return label_; }

  // Validates the index range and returns J_I.
  double coupling(const CouplingIndex& index) const;
  Constituent constituent(int k, int n) const;

  const CouplingOracle& coupling_oracle() const { return couplings_; }
  const ConstituentOracle& constituent_oracle() const { return constituents_; }

 private:
  InstanceParams params_;
  CouplingOracle couplings_;
  ConstituentOracle constituents_;
  std::string label_;
};

// (k, n) pairs in product order U = F_1 F_2 ... F_M, restricted to n <= max_width.
std::vector<std::pair<int, int>> constituent_order(int n_sites, int max_width);

// Sites touched by U_k^(n), in ascending order.
std::vector<int> constituent_sites(int n_sites, int k, int n);

// Saturation level of the closeness condition: q e^{-(n-1)/xi}.
double closeness_limit(const InstanceParams& params, int n);

int default_max_body(int n_sites);

MblInstance build_random_instance(const InstanceParams& params, std::uint64_t seed,
                                  int max_body);

// Dense-feasibility cap; LIOMSIM_MAX_DENSE_N overrides the default of 14.
int max_dense_sites();
void check_dense_feasible(int n_sites);

Matrix dense_unitary(const MblInstance& instance, int max_width);

// Diagonal of sum_I J_I sigma^z_I, restricted to range(I) < r_J when given.
Eigen::VectorXd dense_diagonal_energies(const MblInstance& instance, std::optional<int> r_J);

Matrix dense_hamiltonian(const MblInstance& instance, std::optional<int> r_J,
                         std::optional<int> r_U);

// U sigma^z_i U^dag with U truncated to widths <= max_width.
Matrix dense_liom(const MblInstance& instance, int site, int max_width);

}  // namespace liomsim
