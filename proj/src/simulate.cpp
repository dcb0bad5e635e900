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

#include "liomsim/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <set>
#include <sstream>

#include "liomsim/errors.hpp"
#include "liomsim/rng.hpp"

namespace liomsim {

namespace {

struct GateOp {
  int first_site = 1;
  int width = 1;
  std::optional<Matrix> matrix;  // absent in structure-only mode
  bool overlaps(const std::set<int>& support) const {
    for (int s = first_site; s < first_site + width; ++s)
      if (support.count(s)) return true;
    return false;
  }
  void extend(std::set<int>& support) const {
    for (int s = first_site; s < first_site + width; ++s) support.insert(s);
  }
};

struct DiagOp {
  int first_site = 1;
  int width = 1;
  std::vector<cplx> phases;
  bool overlaps(const std::set<int>& support) const {
    for (int s = first_site; s < first_site + width; ++s)
      if (support.count(s)) return true;
    return false;
  }
  void extend(std::set<int>& support) const {
    for (int s = first_site; s < first_site + width; ++s) support.insert(s);
  }
};

// Contiguous runs of a sorted site list.
std::vector<std::pair<int, int>> runs_of(const std::vector<int>& sites) {
  std::vector<std::pair<int, int>> runs;
  for (int s : sites) {
    if (!runs.empty() && runs.back().first + runs.back().second == s)
      ++runs.back().second;
    else
      runs.emplace_back(s, 1);
  }
  return runs;
}

// Factors of U~ = F_1 ... F_M in product order.
std::vector<GateOp> unitary_factors(const TruncatedInstance& trunc, bool structure_only) {
  const int N = trunc.base().n_sites();
  std::vector<GateOp> ops;
  for (auto [k, n] : constituent_order(N, trunc.radii().r_U)) {
    if (structure_only) {
      // Wrap factors are stored upper run first, matching Constituent.
      auto runs = runs_of(constituent_sites(N, k, n));
      std::reverse(runs.begin(), runs.end());
      for (auto [f, w] : runs) ops.push_back({f, w, std::nullopt});
      continue;
    }
    Constituent c = trunc.instance().constituent(k, n);
    if (c.identity) continue;
    for (const Block& b : c.factors) ops.push_back({b.first_site, b.width(), b.matrix});
  }
  return ops;
}

Matrix site_operator(const ObservableProduct& obs, int site, bool& present) {
  Matrix p = Matrix::Zero(2, 2);
  present = true;
  if (site == obs.pivot_site && obs.pivot != Pivot::none) {
    switch (obs.pivot) {
      case Pivot::pauli_z: p(0, 0) = 1.0; p(1, 1) = -1.0; break;
      case Pivot::project0: p(0, 0) = 1.0; break;
      case Pivot::project1: p(1, 1) = 1.0; break;
      case Pivot::none: break;
    }
  } else if (auto it = obs.projectors.find(site); it != obs.projectors.end()) {
    p(it->second, it->second) = 1.0;
  } else {
    present = false;
    return p;
  }
  if (auto r = obs.rotations.find(site); r != obs.rotations.end()) p = r->second.adjoint() * p * r->second;
  return p;
}

class Placer {
 public:
  Placer(int n_sites, bool structure_only) : cur_(static_cast<std::size_t>(n_sites + 1), 0), structure_only_(structure_only) {}

  void ket(int s) {
    Leg l{s, 0, Side::out};
    if (structure_only_) net_.add_structure({l}, "ket");
    else net_.add(DenseTensor({l}, {cplx(1.0), cplx(0.0)}), "ket");
  }
  void bra(int s) {
    Leg l{s, cur_[static_cast<std::size_t>(s)], Side::in};
    if (structure_only_) net_.add_structure({l}, "bra");
    else net_.add(DenseTensor({l}, {cplx(1.0), cplx(0.0)}), "bra");
  }
  void gate(const GateOp& g, bool adjoint, const char* tag) {
    auto [outs, ins] = advance(g.first_site, g.width);
    if (structure_only_) {
      outs.insert(outs.end(), ins.begin(), ins.end());
      net_.add_structure(std::move(outs), tag);
      return;
    }
    net_.add(DenseTensor::from_operator(adjoint ? Matrix(g.matrix->adjoint()) : *g.matrix, outs, ins), tag);
  }
  void diag(const DiagOp& d, bool conjugate, const char* tag) {
    auto [outs, ins] = advance(d.first_site, d.width);
    if (structure_only_) {
      outs.insert(outs.end(), ins.begin(), ins.end());
      net_.add_structure(std::move(outs), tag);
      return;
    }
    std::vector<cplx> ph = d.phases;
    if (conjugate)
      for (cplx& x : ph) x = std::conj(x);
    net_.add(DenseTensor::diagonal(std::move(outs), std::move(ins), std::move(ph)), tag);
  }
  void op(int s, const Matrix& m) {
    auto [outs, ins] = advance(s, 1);
    if (structure_only_) {
      outs.insert(outs.end(), ins.begin(), ins.end());
      net_.add_structure(std::move(outs), "obs");
      return;
    }
    net_.add(DenseTensor::from_operator(m, outs, ins), "obs");
  }
  TensorNetwork take() { return std::move(net_); }

 private:
  std::pair<std::vector<Leg>, std::vector<Leg>> advance(int first, int width) {
    std::vector<Leg> outs, ins;
    for (int s = first; s < first + width; ++s) {
      int& c = cur_[static_cast<std::size_t>(s)];
      ins.push_back({s, c, Side::in});
      outs.push_back({s, c + 1, Side::out});
      ++c;
    }
    return {outs, ins};
  }

  std::vector<int> cur_;
  bool structure_only_;
  TensorNetwork net_;
};

}  // namespace

void ObservableProduct::validate(int n_sites) const {
  if (pivot_site < 1 || pivot_site > n_sites) throw DomainError("pivot_site must lie in [1, N]");
  for (const auto& [site, bit] : projectors) {
    if (site < 1 || site >= pivot_site) throw DomainError("projector sites must lie strictly below the pivot");
    if (bit != 0 && bit != 1) throw DomainError("projector outcome must be 0 or 1");
  }
  for (const auto& [site, r] : rotations) {
    if (site < 1 || site > n_sites) throw DomainError("rotation site outside [1, N]");
    if (r.rows() != 2 || r.cols() != 2) throw DomainError("rotation must be 2x2");
    if ((r.adjoint() * r - Matrix::Identity(2, 2)).norm() > 1e-10) throw DomainError("rotation must be unitary");
  }
}

std::string ObservableProduct::describe() const {
  std::ostringstream os;
  for (const auto& [site, bit] : projectors) os << "P" << bit << "@" << site << " ";
  switch (pivot) {
    case Pivot::pauli_z: os << "Z@" << pivot_site; break;
    case Pivot::project0: os << "P0@" << pivot_site; break;
    case Pivot::project1: os << "P1@" << pivot_site; break;
    case Pivot::none: os << "I@" << pivot_site; break;
  }
  return os.str();
}

std::vector<SiteBlock> site_blocks(const TruncatedInstance& trunc, double t) {
  const int N = trunc.base().n_sites();
  const int rj = trunc.radii().r_J;
  std::vector<SiteBlock> blocks;
  std::vector<int> sites;
  for (int s = 1; s <= N; ++s) {
    SiteBlock b;
    b.site = s;
    b.width = std::min(N, s + rj - 1) - s + 1;
    const std::size_t dim = std::size_t{1} << b.width;
    std::vector<double> energy(dim, 0.0);
    // Every index with lowest site s inside the block: s plus a subset of the rest.
    for (std::size_t rest = 0; rest < dim / 2; ++rest) {
      sites.assign(1, s);
      std::size_t mask = std::size_t{1} << (b.width - 1);
      for (int j = 1; j < b.width; ++j)
        if (rest >> (b.width - 1 - j) & 1U) {
          sites.push_back(s + j);
          mask |= std::size_t{1} << (b.width - 1 - j);
        }
      const double J = trunc.instance().coupling(CouplingIndex(sites));
      if (J == 0.0) continue;
      for (std::size_t z = 0; z < dim; ++z) energy[z] += (std::popcount(z & mask) & 1) ? -J : J;
    }
    b.phases.resize(dim);
    for (std::size_t z = 0; z < dim; ++z) b.phases[z] = std::polar(1.0, -t * energy[z]);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

TensorNetwork build_expectation_network(const TruncatedInstance& trunc, double t,
                                        const ObservableProduct& obs,
                                        const NetworkOptions& options) {
  const int N = trunc.base().n_sites();
  obs.validate(N);
  const bool structural = options.structure_only;

  const std::vector<GateOp> u = unitary_factors(trunc, structural);
  std::vector<DiagOp> v;
  if (structural) {
    for (int s = 1; s <= N; ++s) v.push_back({s, std::min(N, s + trunc.radii().r_J - 1) - s + 1, {}});
  } else {
    for (SiteBlock& b : site_blocks(trunc, t)) {
      const bool trivial = std::all_of(b.phases.begin(), b.phases.end(), [](cplx x) { return x == cplx(1.0); });
      if (!trivial) v.push_back({b.site, b.width, std::move(b.phases)});
    }
  }

  // Light cone of O through U~^dag O U~, then V^dag . V, then U~ . U~^dag.
  std::set<int> support;
  std::vector<std::pair<int, Matrix>> o_ops;
  for (int s = 1; s <= N; ++s) {
    bool present = false;
    Matrix m = site_operator(obs, s, present);
    if (present) {
      o_ops.emplace_back(s, m);
      support.insert(s);
    }
  }
  const std::size_t M = u.size();
  std::vector<char> keep_inner(M, 1), keep_v(v.size(), 1), keep_outer(M, 1);
  if (options.light_cone) {
    for (std::size_t m = 0; m < M; ++m) {
      keep_inner[m] = u[m].overlaps(support);
      if (keep_inner[m]) u[m].extend(support);
    }
    std::set<int> before_v = support;
    for (std::size_t b = 0; b < v.size(); ++b) {
      keep_v[b] = v[b].overlaps(before_v);
      if (keep_v[b]) v[b].extend(support);
    }
    for (std::size_t m = M; m-- > 0;) {
      keep_outer[m] = u[m].overlaps(support);
      if (keep_outer[m]) u[m].extend(support);
    }
  } else {
    for (int s = 1; s <= N; ++s) support.insert(s);
  }

  Placer p(N, structural);
  for (int s : support) p.ket(s);
  for (std::size_t m = 0; m < M; ++m)
    if (keep_outer[m]) p.gate(u[m], true, "Udag");
  for (std::size_t b = 0; b < v.size(); ++b)
    if (keep_v[b]) p.diag(v[b], false, "V");
  for (std::size_t m = M; m-- > 0;)
    if (keep_inner[m]) p.gate(u[m], false, "U");
  for (const auto& [s, m] : o_ops) p.op(s, m);
  for (std::size_t m = 0; m < M; ++m)
    if (keep_inner[m]) p.gate(u[m], true, "Udag");
  for (std::size_t b = 0; b < v.size(); ++b)
    if (keep_v[b]) p.diag(v[b], true, "Vdag");
  for (std::size_t m = M; m-- > 0;)
    if (keep_outer[m]) p.gate(u[m], false, "U");
  for (int s : support) p.bra(s);
  return p.take();
}

namespace {

RadiiSelection resolve_radii(const SimulationRequest& req) {
  const InstanceParams& params = req.instance.params();
  params.validate();
  if (!(req.epsilon > 0.0 && req.epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(req.t >= 0.0) || !std::isfinite(req.t)) throw DomainError("t must be nonnegative and finite");
  if (req.radii) {
    req.radii->validate(params.n_sites);
    RadiiSelection sel;
    sel.radii = *req.radii;
    sel.achieved = delta_h_terms(params, sel.radii);
    sel.budget = req.t > 0.0 ? req.epsilon / (2.0 * req.t) : INFINITY;
    return sel;
  }
  if (req.t == 0.0) {
    RadiiSelection sel;
    sel.radii = {1, 1};
    sel.achieved = delta_h_terms(params, sel.radii);
    sel.budget = INFINITY;
    return sel;
  }
  return select_radii(params, req.epsilon, req.t);
}

}  // namespace

StrongSimulator::StrongSimulator(const SimulationRequest& req)
    : trunc_(truncate(req.instance, resolve_radii(req).radii)), selection_(resolve_radii(req)), t_(req.t) {}

double StrongSimulator::expectation(const ObservableProduct& obs) const {
  TensorNetwork net = build_expectation_network(trunc_, t_, obs, network_options);
  ContractionPlan plan = qubitwise_schedule(net, schedule_options);
  if (plan.peak_legs > max_legs) throw ContractionTooWide(plan.peak_legs, max_legs);
  ExecuteOptions eo;
  eo.max_legs = max_legs;
  eo.leg_bound = skyline_leg_bound(trunc_.radii().r_U, trunc_.radii().r_J);
  const cplx v = execute(plan, net, eo).value;
  if (std::abs(v.imag()) > kImagTolerance)
    throw NumericalError("expectation has imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

double StrongSimulator::prefix_marginal(const std::string& prefix) const {
  if (prefix.empty()) return 1.0;
  if (static_cast<int>(prefix.size()) > n_sites()) throw DomainError("prefix longer than the chain");
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = marginals_.find(prefix); it != marginals_.end()) return it->second;
  }
  ObservableProduct obs;
  obs.pivot_site = static_cast<int>(prefix.size());
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const char c = prefix[j];
    if (c != '0' && c != '1') throw DomainError("prefix must contain only 0 and 1");
    if (j + 1 == prefix.size())
      obs.pivot = c == '0' ? Pivot::project0 : Pivot::project1;
    else
      obs.projectors[static_cast<int>(j) + 1] = c - '0';
  }
  const double v = expectation(obs);
  std::lock_guard<std::mutex> lock(mu_);
  marginals_.emplace(prefix, v);
  return v;
}

double StrongSimulator::conditional_probability(const std::string& prefix, int site) const {
  if (site < 1 || site > n_sites()) throw DomainError("site must lie in [1, N]");
  if (static_cast<int>(prefix.size()) != site - 1) throw DomainError("prefix length must equal site - 1");
  const double den = prefix_marginal(prefix);
  if (den <= kDegenerateMass) throw DegenerateBranch("prefix '" + prefix + "' has vanishing probability");
  const double num = prefix_marginal(prefix + '0');
  return std::clamp(num / den, 0.0, 1.0);
}

std::vector<SampleRecord> StrongSimulator::sample(std::uint64_t n_samples, std::uint64_t seed) const {
  std::vector<SampleRecord> out(n_samples);
  std::exception_ptr err;
  const int N = n_sites();
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_samples); ++i) {
    try {
      const auto idx = static_cast<std::uint64_t>(i);
      Rng rng(seed, {idx});
      std::string bits;
      for (int site = 1; site <= N; ++site) {
        double p0 = 1.0;
        try {
          p0 = conditional_probability(bits, site);
        } catch (const DegenerateBranch&) {
          p0 = 1.0;
        }
        bits.push_back(rng.uniform() < p0 ? '0' : '1');
      }
      out[idx] = {std::move(bits), seed, idx};
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

double expectation(const SimulationRequest& req, const ObservableProduct& obs) {
  return StrongSimulator(req).expectation(obs);
}

double conditional_probability(const SimulationRequest& req, const std::string& prefix, int site) {
  return StrongSimulator(req).conditional_probability(prefix, site);
}

std::vector<SampleRecord> sample(const SimulationRequest& req, std::uint64_t n_samples,
                                 std::uint64_t seed) {
  return StrongSimulator(req).sample(n_samples, seed);
}

}  // namespace liomsim
