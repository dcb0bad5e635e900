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

#include "liomsim/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

#include "liomsim/errors.hpp"

namespace liomsim {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// off[m] = sum of weights[i] over the set bits of m, bit (n-1-i) <-> weights[i].
std::vector<std::size_t> offset_table(const std::vector<std::size_t>& weights) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> off(std::size_t{1} << n, 0);
  for (std::size_t m = 1; m < off.size(); ++m) {
    const int low = std::countr_zero(m);
    off[m] = off[m & (m - 1)] + weights[n - 1 - static_cast<std::size_t>(low)];
  }
  return off;
}

void check_width(int legs, int max_legs) {
  if (legs > max_legs) throw ContractionTooWide(legs, max_legs);
}

DenseTensor contract_impl(const DenseTensor& a, const DenseTensor& b, const LegPairs& pairs,
                          int max_legs, bool parallel) {
  const int na = a.variables();
  const int nb = b.variables();
  std::vector<char> a_paired(static_cast<std::size_t>(a.rank()), 0);
  std::vector<char> b_paired(static_cast<std::size_t>(b.rank()), 0);
  UnionFind uf(na + nb);
  for (const auto& [la, lb] : pairs) {
    const int pa = a.find(la);
    const int pb = b.find(lb);
    if (pa < 0) throw StructuralError("leg " + to_string(la) + " not present on left tensor");
    if (pb < 0) throw StructuralError("leg " + to_string(lb) + " not present on right tensor");
    if (a_paired[static_cast<std::size_t>(pa)] || b_paired[static_cast<std::size_t>(pb)])
      throw StructuralError("leg paired twice in contraction");
    a_paired[static_cast<std::size_t>(pa)] = b_paired[static_cast<std::size_t>(pb)] = 1;
    uf.unite(a.variable_of(pa), na + b.variable_of(pb));
  }

  std::vector<Leg> out_legs;
  std::vector<int> out_class;
  for (int i = 0; i < a.rank(); ++i)
    if (!a_paired[static_cast<std::size_t>(i)]) {
      out_legs.push_back(a.legs()[static_cast<std::size_t>(i)]);
      out_class.push_back(uf.find(a.variable_of(i)));
    }
  for (int i = 0; i < b.rank(); ++i)
    if (!b_paired[static_cast<std::size_t>(i)]) {
      out_legs.push_back(b.legs()[static_cast<std::size_t>(i)]);
      out_class.push_back(uf.find(na + b.variable_of(i)));
    }
  const int n_out = static_cast<int>(out_legs.size());
  check_width(n_out, max_legs);

  // Classes: free ones carry at least one output leg, the rest are summed.
  std::vector<int> slot(static_cast<std::size_t>(na + nb), -1);
  std::vector<int> free_roots, summed_roots;
  for (int c : out_class)
    if (slot[static_cast<std::size_t>(c)] < 0) {
      slot[static_cast<std::size_t>(c)] = static_cast<int>(free_roots.size());
      free_roots.push_back(c);
    }
  std::vector<char> is_free(static_cast<std::size_t>(na + nb), 0);
  for (int c : free_roots) is_free[static_cast<std::size_t>(c)] = 1;
  for (int v = 0; v < na + nb; ++v) {
    const int c = uf.find(v);
    if (!is_free[static_cast<std::size_t>(c)] && slot[static_cast<std::size_t>(c)] < 0) {
      slot[static_cast<std::size_t>(c)] = static_cast<int>(summed_roots.size());
      summed_roots.push_back(c);
    }
  }
  const std::size_t nf = free_roots.size();
  const std::size_t ns = summed_roots.size();
  if (ns > 30) throw ContractionTooWide(static_cast<int>(ns), 30);

  std::vector<std::size_t> wa_f(nf, 0), wa_s(ns, 0), wb_f(nf, 0), wb_s(ns, 0), wo(nf, 0);
  for (int v = 0; v < na; ++v) {
    const int c = uf.find(v);
    const std::size_t stride = std::size_t{1} << (na - 1 - v);
    (is_free[static_cast<std::size_t>(c)] ? wa_f : wa_s)[static_cast<std::size_t>(slot[static_cast<std::size_t>(c)])] += stride;
  }
  for (int v = 0; v < nb; ++v) {
    const int c = uf.find(na + v);
    const std::size_t stride = std::size_t{1} << (nb - 1 - v);
    (is_free[static_cast<std::size_t>(c)] ? wb_f : wb_s)[static_cast<std::size_t>(slot[static_cast<std::size_t>(c)])] += stride;
  }
  for (int j = 0; j < n_out; ++j)
    wo[static_cast<std::size_t>(slot[static_cast<std::size_t>(out_class[static_cast<std::size_t>(j)])])] +=
        std::size_t{1} << (n_out - 1 - j);

  const auto off_af = offset_table(wa_f);
  const auto off_as = offset_table(wa_s);
  const auto off_bf = offset_table(wb_f);
  const auto off_bs = offset_table(wb_s);
  const auto off_o = offset_table(wo);

  std::vector<cplx> out(std::size_t{1} << n_out, cplx(0.0));
  const cplx* da = a.data().data();
  const cplx* db = b.data().data();
  const std::int64_t n_free = static_cast<std::int64_t>(off_af.size());
  const std::size_t n_sum = off_as.size();
#pragma omp parallel for schedule(static) if (parallel && n_free >= 256)
  for (std::int64_t f = 0; f < n_free; ++f) {
    const cplx* pa = da + off_af[static_cast<std::size_t>(f)];
    const cplx* pb = db + off_bf[static_cast<std::size_t>(f)];
    cplx acc = 0.0;
    for (std::size_t s = 0; s < n_sum; ++s) acc += pa[off_as[s]] * pb[off_bs[s]];
    out[off_o[static_cast<std::size_t>(f)]] = acc;
  }
  return DenseTensor(std::move(out_legs), std::move(out));
}

}  // namespace

std::string to_string(const Leg& leg) {
  return "(site " + std::to_string(leg.site) + ", slice " + std::to_string(leg.slice) + ", " +
         (leg.side == Side::in ? "in" : "out") + ")";
}

DenseTensor::DenseTensor() : data_{cplx(1.0)} {}

DenseTensor::DenseTensor(std::vector<Leg> legs, std::vector<cplx> data)
    : legs_(std::move(legs)), data_(std::move(data)) {
  n_vars_ = rank();
  leg_var_.resize(legs_.size());
  std::iota(leg_var_.begin(), leg_var_.end(), 0);
  if (rank() > 62 || data_.size() != (std::size_t{1} << rank()))
    throw StructuralError("tensor data length must be 2^legs");
  std::vector<Leg> sorted = legs_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StructuralError("tensor has duplicate legs");
}

DenseTensor DenseTensor::scalar(cplx value) {
  DenseTensor t;
  t.data_[0] = value;
  return t;
}

DenseTensor DenseTensor::diagonal(std::vector<Leg> out_legs, std::vector<Leg> in_legs,
                                  std::vector<cplx> diag) {
  if (out_legs.size() != in_legs.size()) throw StructuralError("diagonal tensor needs matching legs");
  const int w = static_cast<int>(out_legs.size());
  if (diag.size() != (std::size_t{1} << w)) throw StructuralError("diagonal length must be 2^width");
  DenseTensor t(std::vector<Leg>{}, std::vector<cplx>{cplx(1.0)});
  t.legs_ = std::move(out_legs);
  t.legs_.insert(t.legs_.end(), in_legs.begin(), in_legs.end());
  t.leg_var_.resize(static_cast<std::size_t>(2 * w));
  for (int j = 0; j < w; ++j) t.leg_var_[static_cast<std::size_t>(j)] = t.leg_var_[static_cast<std::size_t>(w + j)] = j;
  t.n_vars_ = w;
  t.data_ = std::move(diag);
  std::vector<Leg> sorted = t.legs_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StructuralError("tensor has duplicate legs");
  return t;
}

DenseTensor DenseTensor::from_operator(const Matrix& m, std::vector<Leg> out_legs,
                                       std::vector<Leg> in_legs) {
  const std::size_t rows = std::size_t{1} << out_legs.size();
  const std::size_t cols = std::size_t{1} << in_legs.size();
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
    throw StructuralError("operator shape does not match its legs");
  std::vector<cplx> data(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      data[r * cols + c] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  out_legs.insert(out_legs.end(), in_legs.begin(), in_legs.end());
  return DenseTensor(std::move(out_legs), std::move(data));
}

int DenseTensor::find(const Leg& leg) const {
  for (std::size_t i = 0; i < legs_.size(); ++i)
    if (legs_[i] == leg) return static_cast<int>(i);
  return -1;
}

cplx DenseTensor::value() const {
  if (rank() != 0) throw StructuralError("value() needs a rank-0 tensor");
  return data_[0];
}

cplx DenseTensor::at(const std::vector<int>& bits) const {
  if (bits.size() != legs_.size()) throw StructuralError("at() needs one bit per leg");
  std::vector<int> var(static_cast<std::size_t>(n_vars_), -1);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    int& v = var[static_cast<std::size_t>(leg_var_[i])];
    if (v >= 0 && v != bits[i]) return 0.0;
    v = bits[i];
  }
  std::size_t idx = 0;
  for (int v : var) idx = (idx << 1) | static_cast<std::size_t>(v);
  return data_[idx];
}

DenseTensor DenseTensor::expanded() const {
  if (!is_diagonal()) return *this;
  std::vector<cplx> data(std::size_t{1} << rank());
  std::vector<int> bits(legs_.size());
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<int>(idx >> (bits.size() - 1 - i) & 1U);
    data[idx] = at(bits);
  }
  return DenseTensor(legs_, std::move(data));
}

DenseTensor DenseTensor::scaled(cplx alpha) const {
  DenseTensor t = *this;
  for (cplx& x : t.data_) x *= alpha;
  return t;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b, const LegPairs& pairs,
                     int max_legs) {
  return contract_impl(a, b, pairs, max_legs, true);
}

DenseTensor contract_serial(const DenseTensor& a, const DenseTensor& b, const LegPairs& pairs,
                            int max_legs) {
  return contract_impl(a, b, pairs, max_legs, false);
}

}  // namespace liomsim
