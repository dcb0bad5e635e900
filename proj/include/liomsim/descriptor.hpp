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
#include <string>
#include <vector>

#include "json.hpp"
#include "liomsim/complexity.hpp"
#include "liomsim/hardness.hpp"
#include "liomsim/model.hpp"
#include "liomsim/tensor.hpp"

namespace liomsim {

enum class InstanceKind { random, iqp2d, explicit_list };

struct ExplicitCoupling {
  std::vector<int> sites;
  double value = 0.0;
};

struct ExplicitConstituent {
  int k = 1;
  int n = 1;
  Matrix matrix;  // 2^n x 2^n, site k most significant, wrap sites last
};

struct InstanceDescriptor {
  InstanceParams params;
  InstanceKind kind = InstanceKind::random;
  std::uint64_t seed = 0;
  int max_body = 1;
  int rows = 0;
  int cols = 0;
  std::vector<ExplicitCoupling> couplings;
  std::vector<ExplicitConstituent> constituents;
};

nlohmann::json to_json(const InstanceDescriptor& d);
InstanceDescriptor descriptor_from_json(const nlohmann::json& j);

InstanceDescriptor read_descriptor(const std::string& path);
// Writes via a temporary file and rename.
void write_text_atomic(const std::string& path, const std::string& text);

// Builds the instance. Explicit entries are validated (decay, unitarity,
// closeness, wrap factorization); unlisted entries are 0 / identity.
MblInstance instantiate(const InstanceDescriptor& d);

// Lists every coupling with range < max_range and every constituent with
// width <= max_width of `instance` (N <= 14).
InstanceDescriptor explicit_descriptor(const MblInstance& instance, int max_range, int max_width);

// Splits a 2^n matrix into A (x) B with A on the first `width_a` qubits.
// Throws DomainError if the matrix is not a product.
std::pair<Matrix, Matrix> factor_product(const Matrix& m, int width_a);

nlohmann::json to_json(const ContractionPlan& plan);
nlohmann::json to_json(const ComplexityReport& r);
nlohmann::json to_json(const MappingReport& r);

}  // namespace liomsim
