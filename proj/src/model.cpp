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

#include "liomsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>

#include "liomsim/errors.hpp"
#include "liomsim/rng.hpp"

namespace liomsim {

namespace {

constexpr std::uint64_t kCouplingStream = 0x436f75706c696e67ULL;
constexpr std::uint64_t kConstituentStream = 0x436f6e7374697475ULL;
constexpr int kCacheMaxWidth = 8;

Matrix random_hermitian(Rng& rng, int width) {
  const Eigen::Index d = Eigen::Index{1} << width;
  Matrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = cplx(rng.normal(), rng.normal());
  return (a + a.adjoint()) * 0.5;
}

std::pair<double, double> spectrum_range(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed on random generator");
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

struct RandomState {
  InstanceParams params;
  std::uint64_t seed;
  int max_body;
  std::mutex mu;
  std::map<std::pair<int, int>, Constituent> cache;
};

Constituent draw_constituent(const RandomState& st, int k, int n) {
  const int N = st.params.n_sites;
  Rng rng(st.seed, {kConstituentStream, static_cast<std::uint64_t>(k),
                    static_cast<std::uint64_t>(n)});
  const double target = 0.5 * closeness_limit(st.params, n);
  const double theta = 2.0 * std::asin(std::sqrt(target) / 2.0);

  Constituent c;
  c.start = k;
  c.width = n;
  c.identity = false;
  if (k + n - 1 <= N) {
    Matrix g = random_hermitian(rng, n);
    auto [lo, hi] = spectrum_range(g);
    g /= std::max(std::abs(lo), std::abs(hi));
    c.factors.push_back({k, expi_hermitian(g, theta)});
    return c;
  }
  // Wrap: G = (K_A (x) 1 + 1 (x) K_B) / lambda so that e^{i theta G} factorizes.
  const int wa = N - k + 1;
  const int wb = n - wa;
  Matrix ka = random_hermitian(rng, wa);
  Matrix kb = random_hermitian(rng, wb);
  auto [alo, ahi] = spectrum_range(ka);
  auto [blo, bhi] = spectrum_range(kb);
  const double lambda = std::max(std::abs(alo + blo), std::abs(ahi + bhi));
  c.factors.push_back({k, expi_hermitian(ka / lambda, theta)});
  c.factors.push_back({1, expi_hermitian(kb / lambda, theta)});
  return c;
}

void check_site_range(const MblInstance& inst, int k, int n) {
  const int N = inst.n_sites();
  if (k < 1 || k > N) throw DomainError("constituent start k=" + std::to_string(k) + " outside [1, N]");
  if (n < 1 || n > N) throw DomainError("constituent width n=" + std::to_string(n) + " outside [1, N]");
}

}  // namespace

double xi_limit() { return 1.0 / std::numbers::ln2; }

void InstanceParams::validate() const {
  if (n_sites < 1) throw DomainError("n_sites must be >= 1");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("xi must be positive and finite");
  if (!(xi < xi_limit())) throw DomainError("xi must satisfy xi < 1/ln 2");
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("q must satisfy 1 <= q < inf");
}

CouplingIndex::CouplingIndex(std::vector<int> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw DomainError("coupling index must have order >= 1");
  if (sites_.front() < 1) throw DomainError("coupling sites must be >= 1");
  for (std::size_t i = 1; i < sites_.size(); ++i)
    if (sites_[i] <= sites_[i - 1]) throw DomainError("coupling sites must be strictly increasing");
}

Constituent Constituent::make_identity(int k, int n) {
  Constituent c;
  c.start = k;
  c.width = n;
  c.identity = true;
  return c;
}

Matrix Constituent::matrix() const {
  const Eigen::Index d = Eigen::Index{1} << width;
  if (identity) return Matrix::Identity(d, d);
  if (factors.size() == 1) return factors[0].matrix;
  if (factors.size() == 2) return kron(factors[0].matrix, factors[1].matrix);
  throw StructuralError("constituent must have one or two factors");
}

MblInstance::MblInstance(InstanceParams params, CouplingOracle couplings,
                         ConstituentOracle constituents, std::string label)
    : params_(params),
      couplings_(std::move(couplings)),
      constituents_(std::move(constituents)),
      label_(std::move(label)) {
  params_.validate();
  if (!couplings_ || !constituents_) throw DomainError("instance oracles must be callable");
}

double MblInstance::coupling(const CouplingIndex& index) const {
  if (index.order() == 0 || index.last() > params_.n_sites)
    throw DomainError("coupling index outside [1, N]");
  return couplings_(index);
}

Constituent MblInstance::constituent(int k, int n) const {
  check_site_range(*this, k, n);
  Constituent c = constituents_(k, n);
  if (c.start != k || c.width != n) throw StructuralError("constituent oracle returned wrong (k, n)");
  return c;
}

std::vector<std::pair<int, int>> constituent_order(int n_sites, int max_width) {
  std::vector<std::pair<int, int>> order;
  const int top = std::min(n_sites, max_width);
  for (int n = 1; n <= top; ++n)
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i <= (n_sites - n) / n; ++i) order.emplace_back(i * n + j, n);
  return order;
}

std::vector<int> constituent_sites(int n_sites, int k, int n) {
  std::vector<int> sites;
  const int end = k + n - 1;
  for (int s = 1; s <= end - n_sites; ++s) sites.push_back(s);
  for (int s = k; s <= std::min(end, n_sites); ++s) sites.push_back(s);
  return sites;
}

double closeness_limit(const InstanceParams& params, int n) {
  return params.q * std::exp(-(n - 1) / params.xi);
}

int default_max_body(int n_sites) { return std::min(n_sites, 6); }

MblInstance build_random_instance(const InstanceParams& params, std::uint64_t seed,
                                  int max_body) {
  params.validate();
  if (max_body < 1 || max_body > params.n_sites)
    throw DomainError("max_body must lie in [1, n_sites]");
  if (params.q > 8.0) throw DomainError("random constituents require q <= 8");

  auto st = std::make_shared<RandomState>();
  st->params = params;
  st->seed = seed;
  st->max_body = max_body;

  CouplingOracle couplings = [st](const CouplingIndex& idx) -> double {
    if (idx.order() > st->max_body) return 0.0;
    std::vector<std::uint64_t> words{kCouplingStream};
    for (int s : idx.sites()) words.push_back(static_cast<std::uint64_t>(s));
    const double u = to_unit(hash_words(st->seed, words));
    return (2.0 * u - 1.0) * std::exp(-idx.range() / st->params.xi);
  };
  ConstituentOracle constituents = [st](int k, int n) -> Constituent {
    if (n > kCacheMaxWidth) return draw_constituent(*st, k, n);
    std::lock_guard<std::mutex> lock(st->mu);
    auto it = st->cache.find({k, n});
    if (it != st->cache.end()) return it->second;
    Constituent c = draw_constituent(*st, k, n);
    st->cache.emplace(std::make_pair(k, n), c);
    return c;
  };
  return MblInstance(params, std::move(couplings), std::move(constituents),
                     "random seed=" + std::to_string(seed));
}

int max_dense_sites() {
  if (const char* env = std::getenv("LIOMSIM_MAX_DENSE_N")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 30) return static_cast<int>(v);
  }
  return 14;
}

void check_dense_feasible(int n_sites) {
  const int cap = max_dense_sites();
  if (n_sites > cap)
    throw FeasibilityError("dense materialization needs N <= " + std::to_string(cap) + ", got N=" +
                           std::to_string(n_sites));
}

Matrix dense_unitary(const MblInstance& instance, int max_width) {
  const int N = instance.n_sites();
  check_dense_feasible(N);
  if (max_width < 1) throw DomainError("max_width must be >= 1");
  const Eigen::Index d = Eigen::Index{1} << N;
  Matrix u = Matrix::Identity(d, d);
  auto order = constituent_order(N, max_width);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Constituent c = instance.constituent(it->first, it->second);
    if (c.identity) continue;
    for (const Block& b : c.factors) apply_block(u, N, b.first_site, b.matrix);
  }
  return u;
}

Eigen::VectorXd dense_diagonal_energies(const MblInstance& instance, std::optional<int> r_J) {
  const int N = instance.n_sites();
  check_dense_feasible(N);
  const std::size_t d = std::size_t{1} << N;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  std::vector<int> sites;
  for (std::size_t mask = 1; mask < d; ++mask) {
    sites.clear();
    for (int s = 1; s <= N; ++s)
      if (mask >> site_bit(N, s) & 1U) sites.push_back(s);
    if (r_J && sites.back() - sites.front() >= *r_J) continue;
    e(static_cast<Eigen::Index>(mask)) = instance.coupling(CouplingIndex(sites));
  }
  // Walsh-Hadamard transform: E(z) = sum_mask J_mask (-1)^{|mask & z|}.
  for (std::size_t h = 1; h < d; h <<= 1)
    for (std::size_t i = 0; i < d; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = e(static_cast<Eigen::Index>(j));
        const double y = e(static_cast<Eigen::Index>(j + h));
        e(static_cast<Eigen::Index>(j)) = x + y;
        e(static_cast<Eigen::Index>(j + h)) = x - y;
      }
  return e;
}

Matrix dense_hamiltonian(const MblInstance& instance, std::optional<int> r_J,
                         std::optional<int> r_U) {
  const int N = instance.n_sites();
  check_dense_feasible(N);
  const Matrix u = dense_unitary(instance, r_U.value_or(N));
  const Eigen::VectorXd e = dense_diagonal_energies(instance, r_J);
  Matrix h = u * e.cast<cplx>().asDiagonal() * u.adjoint();
  return (h + h.adjoint()) * 0.5;
}

Matrix dense_liom(const MblInstance& instance, int site, int max_width) {
  const int N = instance.n_sites();
  if (site < 1 || site > N) throw DomainError("site outside [1, N]");
  const Matrix u = dense_unitary(instance, max_width);
  const std::size_t d = std::size_t{1} << N;
  Eigen::VectorXcd z(static_cast<Eigen::Index>(d));
  for (std::size_t b = 0; b < d; ++b) z(static_cast<Eigen::Index>(b)) = (b >> site_bit(N, site) & 1U) ? -1.0 : 1.0;
  Matrix tau = u * z.asDiagonal() * u.adjoint();
  return (tau + tau.adjoint()) * 0.5;
}

}  // namespace liomsim
