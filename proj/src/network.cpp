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

#include <algorithm>
#include <climits>
#include <map>
#include <set>

#include "liomsim/errors.hpp"
#include "liomsim/tensor.hpp"

namespace liomsim {

int TensorNetwork::add(DenseTensor tensor, std::string tag) {
  NetworkNode node;
  node.legs = tensor.legs();
  node.tensor = std::move(tensor);
  node.tag = std::move(tag);
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int TensorNetwork::add_structure(std::vector<Leg> legs, std::string tag) {
  nodes_.push_back({std::move(legs), std::nullopt, std::move(tag)});
  return static_cast<int>(nodes_.size()) - 1;
}

bool TensorNetwork::has_data() const {
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [](const NetworkNode& n) { return n.tensor.has_value(); });
}

void TensorNetwork::validate_closed() const {
  std::map<Leg, int> owner;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (const Leg& l : nodes_[i].legs)
      if (!owner.emplace(l, static_cast<int>(i)).second)
        throw StructuralError("leg " + to_string(l) + " appears on two nodes");
  for (const auto& [leg, node] : owner) {
    auto it = owner.find(leg.partner());
    if (it == owner.end()) throw StructuralError("network not closed: leg " + to_string(leg) + " is dangling");
    if (it->second == node) throw StructuralError("leg " + to_string(leg) + " loops back to its own node");
  }
}

ContractionPlan qubitwise_schedule(const TensorNetwork& network, const ScheduleOptions& options) {
  network.validate_closed();
  const auto& nodes = network.nodes();
  const int m = static_cast<int>(nodes.size());

  std::map<Leg, int> owner;
  std::vector<int> qubit(static_cast<std::size_t>(m), INT_MAX);
  for (int i = 0; i < m; ++i)
    for (const Leg& l : nodes[static_cast<std::size_t>(i)].legs) {
      owner[l] = i;
      qubit[static_cast<std::size_t>(i)] = std::min(qubit[static_cast<std::size_t>(i)], l.site);
    }
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return qubit[static_cast<std::size_t>(x)] < qubit[static_cast<std::size_t>(y)];
  });

  ContractionPlan plan;
  plan.node_count = m;
  std::vector<char> absorbed(static_cast<std::size_t>(m), 0);
  std::set<Leg> open;
  int acc = -1;
  int next_id = m;

  auto absorb = [&](int g, int group) {
    absorbed[static_cast<std::size_t>(g)] = 1;
    const auto& legs = nodes[static_cast<std::size_t>(g)].legs;
    if (acc < 0) {
      acc = g;
      open.insert(legs.begin(), legs.end());
      plan.peak_legs = std::max(plan.peak_legs, static_cast<int>(open.size()));
      return;
    }
    ContractionStep step;
    step.lhs = acc;
    step.rhs = g;
    step.result = next_id++;
    step.qubit = group;
    for (const Leg& l : legs) {
      auto it = open.find(l.partner());
      if (it != open.end()) {
        step.pairs.emplace_back(*it, l);
        open.erase(it);
      } else {
        open.insert(l);
      }
    }
    step.predicted_legs = static_cast<int>(open.size());
    plan.peak_legs = std::max(plan.peak_legs, step.predicted_legs);
    plan.steps.push_back(std::move(step));
    acc = plan.steps.back().result;
  };

  auto lookahead = [&](int group) {
    for (bool again = true; again;) {
      again = false;
      std::set<int> candidates;
      for (const Leg& l : open) {
        auto it = owner.find(l.partner());
        if (it != owner.end() && !absorbed[static_cast<std::size_t>(it->second)])
          candidates.insert(it->second);
      }
      for (int c : candidates) {
        const auto& legs = nodes[static_cast<std::size_t>(c)].legs;
        int shared = 0;
        for (const Leg& l : legs) shared += open.count(l.partner()) ? 1 : 0;
        if (static_cast<int>(legs.size()) - 2 * shared <= 0) {
          absorb(c, group);
          again = true;
          break;
        }
      }
    }
  };

  for (int g : order) {
    if (absorbed[static_cast<std::size_t>(g)]) continue;
    const int group = qubit[static_cast<std::size_t>(g)];
    absorb(g, group);
    if (options.lookahead) lookahead(group);
  }
  if (!open.empty()) throw StructuralError("schedule left open legs; network not closed");
  plan.final_node = acc;
  return plan;
}

ExecutionResult execute(const ContractionPlan& plan, const TensorNetwork& network,
                        const ExecuteOptions& options) {
  const auto& nodes = network.nodes();
  if (static_cast<int>(nodes.size()) != plan.node_count)
    throw StructuralError("plan was built for a different network");
  if (!network.has_data()) throw StructuralError("cannot execute a structure-only network");

  ExecutionResult res;
  if (plan.final_node < 0) {
    res.value = 1.0;
    return res;
  }
  std::map<int, DenseTensor> live;
  auto get = [&](int id) -> const DenseTensor& {
    if (id < plan.node_count) return *nodes[static_cast<std::size_t>(id)].tensor;
    auto it = live.find(id);
    if (it == live.end()) throw StructuralError("plan refers to a consumed intermediate");
    return it->second;
  };
  auto check_bound = [&](int legs) {
    res.peak_legs = std::max(res.peak_legs, legs);
    if (options.leg_bound && legs > *options.leg_bound)
      throw StructuralError("open-leg bound violated: " + std::to_string(legs) + " > " +
                            std::to_string(*options.leg_bound));
  };
  if (plan.steps.empty()) {
    const DenseTensor& t = get(plan.final_node);
    check_bound(t.rank());
    res.value = t.value();
    return res;
  }
  check_bound(static_cast<int>(get(plan.steps.front().lhs).rank()));
  for (const ContractionStep& s : plan.steps) {
    DenseTensor r = options.serial ? contract_serial(get(s.lhs), get(s.rhs), s.pairs, options.max_legs)
                                   : contract(get(s.lhs), get(s.rhs), s.pairs, options.max_legs);
    if (r.rank() != s.predicted_legs) throw StructuralError("step produced unexpected leg count");
    check_bound(r.rank());
    live.erase(s.lhs);
    live.erase(s.rhs);
    live.emplace(s.result, std::move(r));
  }
  res.value = get(plan.final_node).value();
  return res;
}

int skyline_leg_bound(int r_U, int r_J) {
  int s = 0;
  for (int n = 2; n <= r_U; ++n) s += n * (n - 1);
  return 4 * (s + 2 * (r_J - 1) + 2);
}

}  // namespace liomsim
