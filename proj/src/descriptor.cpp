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

#include "liomsim/descriptor.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "liomsim/errors.hpp"
#include "liomsim/oracle.hpp"

namespace liomsim {

namespace {

using nlohmann::json;

std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::random: return "random";
    case InstanceKind::iqp2d: return "iqp2d";
    case InstanceKind::explicit_list: return "explicit";
  }
  return "random";
}

InstanceKind kind_from(const std::string& s) {
  if (s == "random") return InstanceKind::random;
  if (s == "iqp2d") return InstanceKind::iqp2d;
  if (s == "explicit") return InstanceKind::explicit_list;
  throw DomainError("unknown instance kind '" + s + "'");
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw DomainError(std::string("descriptor missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("descriptor field '") + name + "' has the wrong type");
  }
}

double max_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

nlohmann::json to_json(const InstanceDescriptor& d) {
  json j;
  j["n_sites"] = d.params.n_sites;
  j["xi"] = d.params.xi;
  j["q"] = d.params.q;
  j["kind"] = kind_name(d.kind);
  j["seed"] = d.seed;
  j["max_body"] = d.max_body;
  if (d.kind == InstanceKind::iqp2d) {
    j["rows"] = d.rows;
    j["cols"] = d.cols;
  }
  if (d.kind == InstanceKind::explicit_list) {
    j["couplings"] = json::array();
    for (const auto& c : d.couplings) j["couplings"].push_back({{"sites", c.sites}, {"value", c.value}});
    j["constituents"] = json::array();
    for (const auto& c : d.constituents) {
      std::vector<double> re, im;
      for (Eigen::Index r = 0; r < c.matrix.rows(); ++r)
        for (Eigen::Index col = 0; col < c.matrix.cols(); ++col) {
          re.push_back(c.matrix(r, col).real());
          im.push_back(c.matrix(r, col).imag());
        }
      j["constituents"].push_back({{"k", c.k}, {"n", c.n}, {"re", re}, {"im", im}});
    }
  }
  return j;
}

InstanceDescriptor descriptor_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("descriptor must be a JSON object");
  InstanceDescriptor d;
  d.params.n_sites = field<int>(j, "n_sites");
  d.params.xi = field<double>(j, "xi");
  d.params.q = j.contains("q") ? field<double>(j, "q") : 1.0;
  d.kind = kind_from(j.contains("kind") ? field<std::string>(j, "kind") : "random");
  d.seed = j.contains("seed") ? field<std::uint64_t>(j, "seed") : 0;
  d.max_body = j.contains("max_body") ? field<int>(j, "max_body") : default_max_body(d.params.n_sites);
  if (d.kind == InstanceKind::iqp2d) {
    d.rows = field<int>(j, "rows");
    d.cols = field<int>(j, "cols");
  }
  if (d.kind == InstanceKind::explicit_list) {
    if (j.contains("couplings"))
      for (const auto& c : j.at("couplings"))
        d.couplings.push_back({field<std::vector<int>>(c, "sites"), field<double>(c, "value")});
    if (j.contains("constituents"))
      for (const auto& c : j.at("constituents")) {
        ExplicitConstituent ec;
        ec.k = field<int>(c, "k");
        ec.n = field<int>(c, "n");
        if (ec.n < 1 || ec.n > 14) throw DomainError("explicit constituent width must lie in [1, 14]");
        const auto re = field<std::vector<double>>(c, "re");
        const auto im = field<std::vector<double>>(c, "im");
        const std::size_t dim = std::size_t{1} << ec.n;
        if (re.size() != dim * dim || im.size() != dim * dim)
          throw DomainError("constituent (" + std::to_string(ec.k) + "," + std::to_string(ec.n) +
                            ") needs 4^n real and imaginary entries");
        ec.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t col = 0; col < dim; ++col)
            ec.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                cplx(re[r * dim + col], im[r * dim + col]);
        d.constituents.push_back(std::move(ec));
      }
  }
  return d;
}

InstanceDescriptor read_descriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("instance file '" + path + "' is not valid JSON: " + e.what());
  }
  return descriptor_from_json(j);
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write '" + tmp + "'");
    out << text;
    if (!out) throw DomainError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DomainError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

std::pair<Matrix, Matrix> factor_product(const Matrix& m, int width_a) {
  const int n = qubits_of_dim(m.rows());
  const int width_b = n - width_a;
  if (width_a < 1 || width_b < 1) throw DomainError("product factor widths must be >= 1");
  const Eigen::Index da = Eigen::Index{1} << width_a;
  const Eigen::Index db = Eigen::Index{1} << width_b;
  // Realignment R[(a1 a2), (b1 b2)] = M[(a1 b1), (a2 b2)] is rank one for products.
  Matrix r(da * da, db * db);
  for (Eigen::Index a1 = 0; a1 < da; ++a1)
    for (Eigen::Index a2 = 0; a2 < da; ++a2)
      for (Eigen::Index b1 = 0; b1 < db; ++b1)
        for (Eigen::Index b2 = 0; b2 < db; ++b2) r(a1 * da + a2, b1 * db + b2) = m(a1 * db + b1, a2 * db + b2);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s = svd.singularValues()(0);
  Matrix a(da, da), b(db, db);
  for (Eigen::Index a1 = 0; a1 < da; ++a1)
    for (Eigen::Index a2 = 0; a2 < da; ++a2) a(a1, a2) = std::sqrt(s) * svd.matrixU()(a1 * da + a2, 0);
  for (Eigen::Index b1 = 0; b1 < db; ++b1)
    for (Eigen::Index b2 = 0; b2 < db; ++b2) b(b1, b2) = std::sqrt(s) * std::conj(svd.matrixV()(b1 * db + b2, 0));
  const double scale = std::sqrt(static_cast<double>(da)) / a.norm();
  a *= scale;
  b /= scale;
  if ((kron(a, b) - m).norm() > 1e-10 * std::max(1.0, m.norm()))
    throw DomainError("wrapping constituent is not a tensor product across the boundary");
  return {a, b};
}

MblInstance instantiate(const InstanceDescriptor& d) {
  d.params.validate();
  switch (d.kind) {
    case InstanceKind::random:
      return build_random_instance(d.params, d.seed, d.max_body);
    case InstanceKind::iqp2d: {
      if (d.rows * d.cols != d.params.n_sites)
        throw DomainError("rows * cols must equal n_sites for an iqp2d instance");
      return build_iqp_instance({d.rows, d.cols, d.params.xi, d.seed}).base;
    }
    case InstanceKind::explicit_list:
      break;
  }
  const int N = d.params.n_sites;
  auto couplings = std::make_shared<std::map<std::vector<int>, double>>();
  for (const auto& c : d.couplings) {
    CouplingIndex idx(c.sites);
    if (idx.last() > N) throw DomainError("explicit coupling site outside [1, N]");
    if (std::abs(c.value) > std::exp(-idx.range() / d.params.xi) * (1.0 + 1e-12))
      throw DomainError("explicit coupling violates |J_I| <= exp(-range/xi)");
    (*couplings)[c.sites] = c.value;
  }
  auto constituents = std::make_shared<std::map<std::pair<int, int>, Constituent>>();
  for (const auto& c : d.constituents) {
    if (c.k < 1 || c.k > N || c.n < 1 || c.n > N) throw DomainError("explicit constituent (k, n) outside [1, N]");
    const Eigen::Index dim = c.matrix.rows();
    if (hermitian_norm(c.matrix.adjoint() * c.matrix - Matrix::Identity(dim, dim)) > 1e-12)
      throw DomainError("explicit constituent (" + std::to_string(c.k) + "," + std::to_string(c.n) + ") is not unitary");
    const double dist = max_singular_value(Matrix::Identity(dim, dim) - c.matrix);
    if (dist * dist > closeness_limit(d.params, c.n) * (1.0 + 1e-9))
      throw DomainError("explicit constituent (" + std::to_string(c.k) + "," + std::to_string(c.n) +
                        ") violates ||1-U||^2 <= q e^{-(n-1)/xi}");
    Constituent con;
    con.start = c.k;
    con.width = c.n;
    con.identity = false;
    if (c.k + c.n - 1 <= N) {
      con.factors.push_back({c.k, c.matrix});
    } else {
      auto [a, b] = factor_product(c.matrix, N - c.k + 1);
      con.factors.push_back({c.k, a});
      con.factors.push_back({1, b});
    }
    (*constituents)[{c.k, c.n}] = std::move(con);
  }
  return MblInstance(
      d.params,
      [couplings](const CouplingIndex& idx) {
        auto it = couplings->find(idx.sites());
        return it == couplings->end() ? 0.0 : it->second;
      },
      [constituents](int k, int n) {
        auto it = constituents->find({k, n});
        return it == constituents->end() ? Constituent::make_identity(k, n) : it->second;
      },
      "explicit");
}

InstanceDescriptor explicit_descriptor(const MblInstance& instance, int max_range, int max_width) {
  const int N = instance.n_sites();
  check_dense_feasible(N);
  InstanceDescriptor d;
  d.params = instance.params();
  d.kind = InstanceKind::explicit_list;
  d.max_body = N;
  std::vector<int> sites;
  for (std::size_t mask = 1; mask < (std::size_t{1} << N); ++mask) {
    sites.clear();
    for (int s = 1; s <= N; ++s)
      if (mask >> site_bit(N, s) & 1U) sites.push_back(s);
    if (sites.back() - sites.front() >= max_range) continue;
    const double v = instance.coupling(CouplingIndex(sites));
    if (v != 0.0) d.couplings.push_back({sites, v});
  }
  for (int n = 1; n <= std::min(N, max_width); ++n)
    for (int k = 1; k <= N; ++k) {
      Constituent c = instance.constituent(k, n);
      if (!c.identity) d.constituents.push_back({k, n, c.matrix()});
    }
  return d;
}

nlohmann::json to_json(const ContractionPlan& plan) {
  json j;
  j["node_count"] = plan.node_count;
  j["final_node"] = plan.final_node;
  j["peak_legs"] = plan.peak_legs;
  j["steps"] = json::array();
  auto leg = [](const Leg& l) {
    return json{{"site", l.site}, {"slice", l.slice}, {"side", l.side == Side::in ? "in" : "out"}};
  };
  for (const auto& s : plan.steps) {
    json pairs = json::array();
    for (const auto& [a, b] : s.pairs) pairs.push_back({leg(a), leg(b)});
    j["steps"].push_back({{"lhs", s.lhs}, {"rhs", s.rhs}, {"result", s.result}, {"qubit", s.qubit},
                          {"predicted_legs", s.predicted_legs}, {"pairs", pairs}});
  }
  return j;
}

nlohmann::json to_json(const ComplexityReport& r) {
  json j;
  j["feasible"] = r.feasible;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.formula_r_J == 0) return j;
  j["formula_r_J"] = r.formula_r_J;
  j["formula_r_U"] = r.formula_r_U;
  j["r_J"] = r.r_J;
  j["r_U"] = r.r_U;
  j["delta_U"] = r.delta_U;
  j["delta_J"] = r.delta_J;
  j["c_U_bound"] = r.c_U_bound;
  j["c_H_bound"] = r.c_H_bound;
  j["total_bound"] = r.total_bound;
  j["units"] = "bound units (hidden constants set to 1)";
  j["error_ledger"] = {{"u_synthesis_each", r.ledger.u_synthesis},
                       {"h_synthesis", r.ledger.h_synthesis},
                       {"truncation_J", r.ledger.truncation_J},
                       {"truncation_U", r.ledger.truncation_U},
                       {"total", r.ledger.total()}};
  return j;
}

nlohmann::json to_json(const MappingReport& r) {
  auto amps = [&](const std::vector<std::pair<std::size_t, cplx>>& v) {
    json a = json::array();
    for (const auto& [idx, amp] : v)
      a.push_back({{"bits", bitstring(r.n_sites, idx)}, {"re", amp.real()}, {"im", amp.imag()}});
    return a;
  };
  return json{{"n_sites", r.n_sites},     {"time", r.time},
              {"fidelity", r.fidelity},   {"tolerance", r.tolerance},
              {"ok", r.ok},               {"leading_1d", amps(r.leading_1d)},
              {"leading_2d", amps(r.leading_2d)}};
}

}  // namespace liomsim
