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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace liomsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Sites are 1-based. Site 1 is the most significant bit of a basis index,
// so a chain of N sites maps site s to bit (N - s).
inline int site_bit(int n_sites, int site) { return n_sites - site; }

// Applies `gate` (2^w x 2^w, first site most significant) to sites
// [first_site, first_site + w) of each of the `n_cols` state vectors stored
// contiguously in `data` (column-major, leading dimension 2^n_sites).
void apply_block(cplx* data, std::size_t n_cols, int n_sites, int first_site,
                 const Matrix& gate);
void apply_block_serial(cplx* data, std::size_t n_cols, int n_sites, int first_site,
                        const Matrix& gate);

inline void apply_block(Matrix& states, int n_sites, int first_site, const Matrix& gate) {
  apply_block(states.data(), static_cast<std::size_t>(states.cols()), n_sites, first_site, gate);
}
inline void apply_block(Vector& state, int n_sites, int first_site, const Matrix& gate) {
  apply_block(state.data(), 1, n_sites, first_site, gate);
}

// Multiplies each column elementwise by `diag` (length 2^n_sites).
void apply_diagonal(cplx* data, std::size_t n_cols, std::size_t dim, const cplx* diag);
void apply_diagonal_serial(cplx* data, std::size_t n_cols, std::size_t dim, const cplx* diag);

Matrix kron(const Matrix& a, const Matrix& b);

// exp(i * theta * G) for Hermitian G.
Matrix expi_hermitian(const Matrix& g, double theta);

// Number of qubits w with 2^w == dim; throws StructuralError otherwise.
int qubits_of_dim(Eigen::Index dim);

}  // namespace liomsim
