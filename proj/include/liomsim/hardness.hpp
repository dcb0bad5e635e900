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
#include <optional>
#include <utility>
#include <vector>

#include "liomsim/model.hpp"

namespace liomsim {

struct HardnessSpec {
  int rows = 2;
  int cols = 2;
  double xi = 1.0;
  std::uint64_t field_seed = 0;

  int n_sites() const { return rows * cols; }
  void validate() const;
};

// Square sqrt(N) x sqrt(N) grid; throws DomainError when N is not a square.
HardnessSpec square_spec(int n_sites, double xi, std::uint64_t field_seed);

struct HardnessInstance {
  MblInstance base;
  HardnessSpec spec;
  double coupling = 0.0;                    // J on every grid edge
  std::vector<double> fields;               // h_i, index i-1
  std::vector<double> representatives;      // e^{cols/xi} h_i, each 1 or 3/2
  std::vector<std::pair<int, int>> layout;  // site i -> (row, col), 0-based
  std::vector<std::pair<int, int>> edges;   // 1-based site pairs, i < j
};

HardnessInstance build_iqp_instance(const HardnessSpec& spec);

double hardness_time(int n_sites, double xi);
// pi e^{cols/xi} / 4, the rectangular generalization.
double hardness_time(const HardnessSpec& spec);

struct FieldPerturbation {
  int site = 1;
  double representative_shift = 0.25;
};

struct MappingReport {
  int n_sites = 0;
  double time = 0.0;
  double fidelity = 0.0;
  double tolerance = 0.0;
  bool ok = false;
  // Largest-magnitude amplitudes of each state (basis index, amplitude).
  std::vector<std::pair<std::size_t, cplx>> leading_1d;
  std::vector<std::pair<std::size_t, cplx>> leading_2d;
};

MappingReport verify_2d_mapping(const HardnessSpec& spec, double tolerance,
                                const std::optional<FieldPerturbation>& perturb = std::nullopt);

}  // namespace liomsim
