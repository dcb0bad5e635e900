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

#include "liomsim/model.hpp"

namespace liomsim {

struct TruncationRadii {
  int r_J = 1;
  int r_U = 1;

  void validate(int n_sites) const;
  bool operator==(const TruncationRadii&) const = default;
};

struct BoundConstants {
  double xi = 0.0;
  double q = 1.0;
  double a = 0.0;      // ln(e^{1/xi} - 1)
  double kappa = 0.0;  // 1/xi - ln 2
  double k_min = 0.0;  // min(kappa, a)
  double big_c = 10.8;
  double c1 = 0.0;
  double c2 = 0.0;
  double c_J = 0.0;
  double c_U = 0.0;

  static BoundConstants from(double xi, double q);
  double n_star(int p) const;
};

// Upper bound on S_{p,n0} = sum_{n >= n0} C(n, p) e^{-n/xi}.
double spn0_bound(int p, int n0, double xi);
// Upper bound on sum_{p=x1}^{x2} S_{p,n0}.
double spn0_aggregate_bound(int x1, int x2, int n0, double xi);

// Bound on ||tau_i - tau~_i||.
double liom_deviation_bound(const InstanceParams& params, int r_U);

struct DeltaHTerms {
  double term_J = 0.0;
  double term_U = 0.0;
  double total() const { return term_J + term_U; }
};

DeltaHTerms delta_h_terms(const InstanceParams& params, const TruncationRadii& radii);
double delta_h_bound(const InstanceParams& params, const TruncationRadii& radii);

struct RadiiSelection {
  TruncationRadii radii;
  bool saturated = false;
  DeltaHTerms achieved;
  double budget = 0.0;  // eps / (2t) per term
};

RadiiSelection select_radii(const InstanceParams& params, double epsilon, double t);

class TruncatedInstance {
 public:
  TruncatedInstance(const MblInstance& base, TruncationRadii radii);

  const MblInstance& base() const { return base_; }
  const MblInstance& instance() const { return truncated_; }
  const TruncationRadii& radii() const { return radii_; }
  double delta_h_bound() const { return bound_; }

 private:
  MblInstance base_;
  MblInstance truncated_;
  TruncationRadii radii_;
  double bound_;
};

TruncatedInstance truncate(const MblInstance& instance, const TruncationRadii& radii);

}  // namespace liomsim
