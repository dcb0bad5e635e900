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

#include "liomsim/kernels.hpp"

#include <cstdint>
#include <vector>

#include "liomsim/errors.hpp"

namespace liomsim {

namespace {

struct BlockLayout {
  int width;
  int low_bit;
  std::size_t dim;
  std::size_t outer;
};

BlockLayout layout_for(int n_sites, int first_site, const Matrix& gate) {
  const int w = qubits_of_dim(gate.rows());
  if (gate.cols() != gate.rows()) throw StructuralError("gate must be square");
  if (first_site < 1 || first_site + w - 1 > n_sites)
    throw StructuralError("gate support outside the chain");
  BlockLayout l;
  l.width = w;
  l.low_bit = n_sites - (first_site + w - 1);
  l.dim = std::size_t{1} << n_sites;
  l.outer = std::size_t{1} << (n_sites - w);
  return l;
}

inline void apply_one(cplx* col, const BlockLayout& l, std::size_t o, const Matrix& gate,
                      cplx* in) {
  const std::size_t low_mask = (std::size_t{1} << l.low_bit) - 1;
  const std::size_t base = ((o & ~low_mask) << l.width) | (o & low_mask);
  const std::size_t m = std::size_t{1} << l.width;
  for (std::size_t r = 0; r < m; ++r) in[r] = col[base | (r << l.low_bit)];
  for (std::size_t r = 0; r < m; ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
    col[base | (r << l.low_bit)] = acc;
  }
}

}  // namespace

int qubits_of_dim(Eigen::Index dim) {
  int w = 0;
  while ((Eigen::Index{1} << w) < dim) ++w;
  if ((Eigen::Index{1} << w) != dim || dim < 2)
    throw StructuralError("dimension " + std::to_string(dim) + " is not a power of two >= 2");
  return w;
}

void apply_block(cplx* data, std::size_t n_cols, int n_sites, int first_site,
                 const Matrix& gate) {
  const BlockLayout l = layout_for(n_sites, first_site, gate);
  const std::int64_t total = static_cast<std::int64_t>(n_cols * l.outer);
#pragma omp parallel
  {
    std::vector<cplx> in(std::size_t{1} << l.width);
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) {
      const std::size_t c = static_cast<std::size_t>(idx) / l.outer;
      const std::size_t o = static_cast<std::size_t>(idx) % l.outer;
      apply_one(data + c * l.dim, l, o, gate, in.data());
    }
  }
}

void apply_block_serial(cplx* data, std::size_t n_cols, int n_sites, int first_site,
                        const Matrix& gate) {
  const BlockLayout l = layout_for(n_sites, first_site, gate);
  std::vector<cplx> in(std::size_t{1} << l.width);
  for (std::size_t c = 0; c < n_cols; ++c)
    for (std::size_t o = 0; o < l.outer; ++o) apply_one(data + c * l.dim, l, o, gate, in.data());
}

void apply_diagonal(cplx* data, std::size_t n_cols, std::size_t dim, const cplx* diag) {
  const std::int64_t total = static_cast<std::int64_t>(n_cols * dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < total; ++idx)
    data[idx] *= diag[static_cast<std::size_t>(idx) % dim];
}

void apply_diagonal_serial(cplx* data, std::size_t n_cols, std::size_t dim, const cplx* diag) {
  for (std::size_t c = 0; c < n_cols; ++c)
    for (std::size_t i = 0; i < dim; ++i) data[c * dim + i] *= diag[i];
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix expi_hermitian(const Matrix& g, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in expi_hermitian");
  Vector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::polar(1.0, theta * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace liomsim
