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

#include <string>
#include <utility>
#include <vector>

namespace liomsim {

struct ComplexityQuery {
  int n_sites = 16;
  double t = 1.0;
  double xi = 0.15;
  double epsilon = 0.1;
  double q = 1.0;

  void validate() const;
};

struct ErrorLedger {
  double u_synthesis = 0.0;   // per copy of U~, exact closed form
  double h_synthesis = 0.0;   // diagonal evolution
  double truncation_J = 0.0;  // term_J * t
  double truncation_U = 0.0;  // term_U * t
  double total() const { return 2.0 * u_synthesis + h_synthesis + truncation_J + truncation_U; }
};

// Counts are in bound units: every hidden O(1) prefactor is set to 1.
struct ComplexityReport {
  bool feasible = false;
  std::string reason;
  int formula_r_J = 0;
  int formula_r_U = 0;
  int r_J = 0;
  int r_U = 0;
  double delta_U = 0.0;
  double delta_J = 0.0;
  double c_U_bound = 0.0;
  double c_H_bound = 0.0;
  double total_bound = 0.0;
  ErrorLedger ledger;
};

// Localization length at which the U~ exponent of t reaches 1.
double complexity_xi_limit();

ComplexityReport circuit_complexity_bound(const ComplexityQuery& query);

struct SynthesisError {
  double exact = 0.0;
  double cap = 0.0;
};
SynthesisError u_synthesis_error(int n_sites, int r_U, double delta);

// (2.02 xi ln 4, 1.01 ln 4 / k_min)
std::pair<double, double> sublinearity_exponents(double xi, double k_min);
std::pair<double, double> sublinearity_exponents(double xi);

// Least-squares slope of log(total_bound) against log(t).
double loglog_slope(const ComplexityQuery& base, const std::vector<double>& times);

}  // namespace liomsim
