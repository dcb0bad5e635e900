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

#include "liomsim/oracle.hpp"

#include <cmath>
#include <cstdint>

#include "liomsim/errors.hpp"
#include "liomsim/rng.hpp"
#include "liomsim/truncation.hpp"

namespace liomsim {

namespace {

void matvec(const Matrix& m, const cplx* x, cplx* y) {
  const std::int64_t rows = m.rows();
  const Eigen::Index cols = m.cols();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) acc += m(static_cast<Eigen::Index>(i), j) * x[j];
    y[i] = acc;
  }
}

void adjoint_matvec(const Matrix& m, const cplx* x, cplx* y) {
  const std::int64_t cols = m.cols();
  const Eigen::Index rows = m.rows();
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < cols; ++j) {
    cplx acc = 0.0;
    const cplx* col = m.data() + j * rows;
    for (Eigen::Index i = 0; i < rows; ++i) acc += std::conj(col[i]) * x[i];
    y[j] = acc;
  }
}

void matvec_serial(const Matrix& m, const cplx* x, cplx* y) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
}

void adjoint_matvec_serial(const Matrix& m, const cplx* x, cplx* y) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::conj(m(i, j)) * x[i];
    y[j] = acc;
  }
}

template <class Mv, class AdjMv>
double power_norm(const Matrix& m, double rel_tol, int max_iter, Mv mv, AdjMv adj) {
  if (m.rows() != m.cols()) throw StructuralError("operator_norm expects a square matrix");
  const Eigen::Index d = m.cols();
  if (d == 0) return 0.0;
  Rng rng(0x706f776572ULL);
  Vector v(d), mvv(d), w(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(rng.normal(), rng.normal());
  v.normalize();
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    mv(m, v.data(), mvv.data());
    adj(m, mvv.data(), w.data());
    const double lambda = v.dot(w).real();
    if (lambda <= 0.0 && w.norm() == 0.0) return 0.0;
    const double residual = (w - lambda * v).norm();
    if (residual <= rel_tol * lambda) return std::sqrt(lambda);
    // Clustered top singular values: the Rayleigh quotient has settled even
    // though the vector keeps rotating inside the cluster.
    if (it > 20 && residual <= std::sqrt(rel_tol) * lambda &&
        std::abs(lambda - prev) <= 1e-3 * rel_tol * lambda)
      return std::sqrt(lambda);
    prev = lambda;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
  }
  throw NumericalError("operator_norm: power iteration did not converge in " +
                       std::to_string(max_iter) + " iterations");
}

}  // namespace

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

std::string bitstring(int n_sites, std::size_t index) {
  std::string s(static_cast<std::size_t>(n_sites), '0');
  for (int site = 1; site <= n_sites; ++site)
    if (index >> site_bit(n_sites, site) & 1U) s[static_cast<std::size_t>(site - 1)] = '1';
  return s;
}

std::size_t basis_index(const std::string& bits) {
  std::size_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw DomainError("bitstring must contain only 0 and 1");
    idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  }
  return idx;
}

DenseState evolve_dense(const Matrix& hamiltonian, double t, int n_sites) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in exact_state");
  const Matrix& v = es.eigenvectors();
  // Coefficients of |0...0> in the eigenbasis are the conjugated first row.
  Vector c = v.row(0).adjoint();
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -t * es.eigenvalues()(i));
  DenseState s;
  s.n_sites = n_sites;
  s.amplitudes = v * c;
  const double norm = s.amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw NumericalError("evolved state lost normalization");
  return s;
}

// Applies U~^dag, the diagonal phases, then U~ gate by gate. This keeps the
// error of small amplitudes relative to their size, which an eigensolve of H
// does not.
DenseState exact_state(const MblInstance& instance, double t,
                       const std::optional<TruncationRadii>& radii) {
  const int N = instance.n_sites();
  check_dense_feasible(N);
  std::optional<int> rj;
  int ru = N;
  if (radii) {
    radii->validate(N);
    rj = radii->r_J;
    ru = radii->r_U;
  }
  DenseState s;
  s.n_sites = N;
  s.amplitudes = Vector::Zero(Eigen::Index{1} << N);
  s.amplitudes(0) = 1.0;

  std::vector<Constituent> gates;
  for (auto [k, n] : constituent_order(N, ru)) {
    Constituent c = instance.constituent(k, n);
    if (!c.identity) gates.push_back(std::move(c));
  }
  for (const Constituent& c : gates)
    for (const Block& b : c.factors) apply_block(s.amplitudes, N, b.first_site, b.matrix.adjoint());
  const Eigen::VectorXd e = dense_diagonal_energies(instance, rj);
  for (Eigen::Index z = 0; z < e.size(); ++z) s.amplitudes(z) *= std::polar(1.0, -t * e(z));
  for (auto it = gates.rbegin(); it != gates.rend(); ++it)
    for (const Block& b : it->factors) apply_block(s.amplitudes, N, b.first_site, b.matrix);

  if (std::abs(s.amplitudes.norm() - 1.0) > 1e-10) throw NumericalError("evolved state lost normalization");
  return s;
}

OutcomeDistribution distribution_of(const DenseState& state) {
  OutcomeDistribution d;
  d.n_sites = state.n_sites;
  d.probabilities.resize(static_cast<std::size_t>(state.amplitudes.size()));
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    d.probabilities[static_cast<std::size_t>(i)] = std::norm(state.amplitudes(i));
  return d;
}

OutcomeDistribution exact_distribution(const MblInstance& instance, double t,
                                       const std::optional<TruncationRadii>& radii) {
  return distribution_of(exact_state(instance, t, radii));
}

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  if (a.probabilities.size() != b.probabilities.size())
    throw StructuralError("distributions over different outcome spaces");
  double s = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i)
    s += std::abs(a.probabilities[i] - b.probabilities[i]);
  return 0.5 * s;
}

double operator_norm(const Matrix& m, double rel_tol, int max_iter) {
  return power_norm(m, rel_tol, max_iter, matvec, adjoint_matvec);
}

double operator_norm_serial(const Matrix& m, double rel_tol, int max_iter) {
  return power_norm(m, rel_tol, max_iter, matvec_serial, adjoint_matvec_serial);
}

double hermitian_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in hermitian_norm");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace liomsim
