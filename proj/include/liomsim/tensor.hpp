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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liomsim/kernels.hpp"

namespace liomsim {

enum class Side : std::uint8_t { in = 0, out = 1 };

// A wire segment endpoint. The bond (site, slice) joins exactly one `out`
// leg (the tensor that produces the slice) with one `in` leg (the consumer).
struct Leg {
  int site = 0;
  int slice = 0;
  Side side = Side::in;

  auto operator<=>(const Leg&) const = default;
  Leg partner() const { return {site, slice, side == Side::in ? Side::out : Side::in}; }
};

std::string to_string(const Leg& leg);

using LegPairs = std::vector<std::pair<Leg, Leg>>;

inline constexpr int kDefaultMaxLegs = 26;

// Complex tensor with binary legs. Data is row-major over index variables,
// first variable most significant. Dense tensors have one variable per leg.
// Diagonal tensors have legs [out_1..out_w, in_1..in_w] sharing w variables,
// so only the 2^w diagonal entries are stored.
class DenseTensor {
 public:
  DenseTensor();  // scalar 1
  DenseTensor(std::vector<Leg> legs, std::vector<cplx> data);

  static DenseTensor scalar(cplx value);
  static DenseTensor diagonal(std::vector<Leg> out_legs, std::vector<Leg> in_legs,
                              std::vector<cplx> diag);
  // Rows indexed by out legs, columns by in legs.
  static DenseTensor from_operator(const Matrix& m, std::vector<Leg> out_legs,
                                   std::vector<Leg> in_legs);

  const std::vector<Leg>& legs() const { return legs_; }
  int rank() const { return static_cast<int>(legs_.size()); }
  int variables() const { return n_vars_; }
  int variable_of(int leg_position) const { return leg_var_[static_cast<std::size_t>(leg_position)]; }
  bool is_diagonal() const { return n_vars_ != rank(); }
  const std::vector<cplx>& data() const { return data_; }

  // Position of `leg`, or -1.
  int find(const Leg& leg) const;
  cplx value() const;  // rank 0 only
  // Entry for one bit per leg (leg order).
  cplx at(const std::vector<int>& bits) const;
  DenseTensor expanded() const;
  DenseTensor scaled(cplx alpha) const;

 private:
  std::vector<Leg> legs_;
  std::vector<int> leg_var_;
  int n_vars_ = 0;
  std::vector<cplx> data_;
};

// Contracts the paired legs. Remaining legs are a's then b's, in order.
// Paired summation runs in ascending index order, so results are reproducible.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b, const LegPairs& pairs,
                     int max_legs = kDefaultMaxLegs);
DenseTensor contract_serial(const DenseTensor& a, const DenseTensor& b, const LegPairs& pairs,
                            int max_legs = kDefaultMaxLegs);

struct NetworkNode {
  std::vector<Leg> legs;
  std::optional<DenseTensor> tensor;  // absent in structure-only networks
  std::string tag;
};

class TensorNetwork {
 public:
  int add(DenseTensor tensor, std::string tag = {});
  int add_structure(std::vector<Leg> legs, std::string tag = {});

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool has_data() const;

  // Throws StructuralError unless every leg meets its partner in another node.
  void validate_closed() const;

 private:
  std::vector<NetworkNode> nodes_;
};

struct ContractionStep {
  int lhs = 0;
  int rhs = 0;
  int result = 0;
  LegPairs pairs;
  int predicted_legs = 0;
  int qubit = 0;
};

struct ContractionPlan {
  std::vector<ContractionStep> steps;
  int node_count = 0;
  int final_node = -1;
  int peak_legs = 0;
};

struct ScheduleOptions {
  // After each absorption, also absorb any tensor on an open bond whose
  // absorption does not increase the open-leg count.
  bool lookahead = true;
};

// Groups nodes by their lowest site, ascending; within a group, nodes are
// absorbed in circuit (insertion) order.
ContractionPlan qubitwise_schedule(const TensorNetwork& network, const ScheduleOptions& options = {});

struct ExecuteOptions {
  int max_legs = kDefaultMaxLegs;
  std::optional<int> leg_bound;  // violated bound raises StructuralError
  bool serial = false;
};

struct ExecutionResult {
  cplx value = 0.0;
  int peak_legs = 0;
};

ExecutionResult execute(const ContractionPlan& plan, const TensorNetwork& network,
                        const ExecuteOptions& options = {});

// 4 [sum_{n=2}^{r_U} n(n-1) + 2(r_J - 1) + 2]
int skyline_leg_bound(int r_U, int r_J);

}  // namespace liomsim
