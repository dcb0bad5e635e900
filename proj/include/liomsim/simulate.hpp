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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "liomsim/oracle.hpp"
#include "liomsim/tensor.hpp"
#include "liomsim/truncation.hpp"

namespace liomsim {

enum class Pivot { pauli_z, project0, project1, none };

struct ObservableProduct {
  int pivot_site = 1;
  Pivot pivot = Pivot::pauli_z;
  std::map<int, int> projectors;          // site j < pivot -> outcome bit
  std::map<int, Matrix> rotations;        // site -> 2x2 unitary R, measured as R^dag P R

  void validate(int n_sites) const;
  std::string describe() const;
};

struct SiteBlock {
  int site = 1;
  int width = 1;
  std::vector<cplx> phases;  // site `site` most significant
};

struct SimulationRequest {
  MblInstance instance;
  double t = 0.0;
  double epsilon = 0.05;
  std::optional<TruncationRadii> radii;  // select_radii when absent
};

struct SampleRecord {
  std::string bits;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

std::vector<SiteBlock> site_blocks(const TruncatedInstance& trunc, double t);

struct NetworkOptions {
  // Cancel U U^dag and V V^dag pairs outside the observable's light cone.
  bool light_cone = true;
  // Structure only: no oracle calls, every constituent up to r_U present.
  bool structure_only = false;
};

TensorNetwork build_expectation_network(const TruncatedInstance& trunc, double t,
                                        const ObservableProduct& obs,
                                        const NetworkOptions& options = {});

// Strong simulator bound to one request. Expectation values of projector
// products are memoized, so repeated conditional queries along a sampling
// chain reuse earlier contractions.
class StrongSimulator {
 public:
  explicit StrongSimulator(const SimulationRequest& req);

  const TruncatedInstance& truncated() const { return trunc_; }
  const RadiiSelection& selection() const { return selection_; }
  double t() const { return t_; }
  int n_sites() const { return trunc_.base().n_sites(); }

  double expectation(const ObservableProduct& obs) const;
  // <prod_j P_{z_j}> over the given prefix (site 1 first); empty prefix -> 1.
  double prefix_marginal(const std::string& prefix) const;
  // P(z_site = 0 | prefix), prefix length = site - 1.
  double conditional_probability(const std::string& prefix, int site) const;
  std::vector<SampleRecord> sample(std::uint64_t n_samples, std::uint64_t seed) const;

  int max_legs = kDefaultMaxLegs;
  NetworkOptions network_options;
  ScheduleOptions schedule_options;

 private:
  TruncatedInstance trunc_;
  RadiiSelection selection_;
  double t_;
  mutable std::mutex mu_;
  mutable std::map<std::string, double> marginals_;
};

double expectation(const SimulationRequest& req, const ObservableProduct& obs);
double conditional_probability(const SimulationRequest& req, const std::string& prefix, int site);
std::vector<SampleRecord> sample(const SimulationRequest& req, std::uint64_t n_samples,
                                 std::uint64_t seed);

// Probability mass below which a prefix is treated as a vanishing branch.
inline constexpr double kDegenerateMass = 1e-30;
inline constexpr double kImagTolerance = 1e-9;

}  // namespace liomsim
