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

// liomsim: command-line front end.
//
// Exit status: 0 success, 1 domain/feasibility/numerical error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "liomsim/complexity.hpp"
#include "liomsim/descriptor.hpp"
#include "liomsim/errors.hpp"
#include "liomsim/hardness.hpp"
#include "liomsim/oracle.hpp"
#include "liomsim/simulate.hpp"
#include "liomsim/truncation.hpp"

using namespace liomsim;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string instance;
  std::string out;
  std::string format;
  double t = 1.0;
  double eps = 0.05;
  std::uint64_t samples = 100;
  std::uint64_t seed = 0;
  std::optional<int> rj, ru;

  // gen / bound without an instance file
  int n = 0;
  double xi = 0.5;
  double q = 1.0;
  int max_body = 0;
  std::string kind = "random";
  int max_range = 0;
  int max_width = 0;

  // expect
  int pivot = 1;
  std::string pauli = "z";
  std::string prefix;

  // hardness
  int rows = 2, cols = 2;
  double tol = 1e-9;
  std::optional<int> perturb_site;
  double perturb_shift = 0.25;

  // gatecount
  bool sweep = false;
  double t_min = 1e2, t_max = 1e8;
  int points = 13;

  // verify
  int trials = 5;
  int max_legs = kDefaultMaxLegs;
};

void emit(const Config& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_text_atomic(c.out, text);
}

std::optional<TruncationRadii> radii_override(const Config& c) {
  if (c.rj.has_value() != c.ru.has_value()) throw UsageError("--rj and --ru must be given together");
  if (!c.rj) return std::nullopt;
  return TruncationRadii{*c.rj, *c.ru};
}

InstanceParams params_from_flags(const Config& c) {
  if (c.n < 1) throw UsageError("--n is required when no --instance is given");
  return {c.n, c.xi, c.q};
}

MblInstance load_instance(const Config& c) {
  if (c.instance.empty()) throw UsageError("--instance is required");
  return instantiate(read_descriptor(c.instance));
}

std::string csv_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int run_gen(const Config& c) {
  InstanceDescriptor d;
  d.params = params_from_flags(c);
  d.params.validate();
  d.seed = c.seed;
  d.max_body = c.max_body > 0 ? c.max_body : default_max_body(c.n);
  if (c.kind == "random") {
    d.kind = InstanceKind::random;
    instantiate(d);  // validates
  } else if (c.kind == "explicit") {
    MblInstance inst = build_random_instance(d.params, d.seed, d.max_body);
    d = explicit_descriptor(inst, c.max_range > 0 ? c.max_range : c.n, c.max_width > 0 ? c.max_width : c.n);
  } else {
    throw UsageError("--kind must be random or explicit");
  }
  emit(c, to_json(d).dump(2) + "\n");
  return 0;
}

int run_bound(const Config& c) {
  const InstanceParams params = c.instance.empty() ? params_from_flags(c) : load_instance(c).params();
  params.validate();
  RadiiSelection sel;
  if (auto r = radii_override(c)) {
    r->validate(params.n_sites);
    sel.radii = *r;
    sel.achieved = delta_h_terms(params, *r);
  } else {
    sel = select_radii(params, c.eps, c.t);
    if (sel.saturated)
      std::cerr << "warning: accuracy unreachable at r = N; achieved bound " << sel.achieved.total()
                << " exceeds eps/t = " << c.eps / c.t << "\n";
  }
  std::string text = "N,xi,q,r_J,r_U,term_J,term_U,total,epsilon_over_t\n";
  text += std::to_string(params.n_sites) + "," + csv_double(params.xi) + "," + csv_double(params.q) + "," +
          std::to_string(sel.radii.r_J) + "," + std::to_string(sel.radii.r_U) + "," +
          csv_double(sel.achieved.term_J) + "," + csv_double(sel.achieved.term_U) + "," +
          csv_double(sel.achieved.total()) + "," + csv_double(c.eps / c.t) + "\n";
  emit(c, text);
  return 0;
}

std::unique_ptr<StrongSimulator> make_simulator(const Config& c) {
  SimulationRequest req{load_instance(c), c.t, c.eps, radii_override(c)};
  auto sim = std::make_unique<StrongSimulator>(req);
  sim->max_legs = c.max_legs;
  if (sim->selection().saturated)
    std::cerr << "warning: radii saturated at N; certified bound " << sim->selection().achieved.total() * c.t
              << " exceeds eps\n";
  return sim;
}

int run_expect(const Config& c) {
  auto sim = make_simulator(c);
  ObservableProduct obs;
  obs.pivot_site = c.pivot;
  if (c.pauli == "z") obs.pivot = Pivot::pauli_z;
  else if (c.pauli == "p0") obs.pivot = Pivot::project0;
  else if (c.pauli == "p1") obs.pivot = Pivot::project1;
  else if (c.pauli == "none") obs.pivot = Pivot::none;
  else throw UsageError("--pauli must be one of z, p0, p1, none");
  for (std::size_t j = 0; j < c.prefix.size(); ++j) {
    if (c.prefix[j] != '0' && c.prefix[j] != '1') throw UsageError("--prefix must be a bitstring");
    obs.projectors[static_cast<int>(j) + 1] = c.prefix[j] - '0';
  }
  const double v = sim->expectation(obs);
  emit(c, "observable,value\n\"" + obs.describe() + "\"," + csv_double(v) + "\n");
  return 0;
}

int run_sample(const Config& c) {
  auto sim = make_simulator(c);
  const auto records = sim->sample(c.samples, c.seed);
  std::string text;
  for (const auto& r : records)
    text += json{{"bits", r.bits}, {"seed", r.seed}, {"index", r.index}}.dump() + "\n";
  emit(c, text);
  return 0;
}

int run_hard_gen(const Config& c) {
  HardnessSpec spec{c.rows, c.cols, c.xi, c.seed};
  build_iqp_instance(spec);  // validates
  InstanceDescriptor d;
  d.params = {spec.n_sites(), spec.xi, 4.0};
  d.kind = InstanceKind::iqp2d;
  d.seed = c.seed;
  d.max_body = std::min(2, spec.n_sites());
  d.rows = c.rows;
  d.cols = c.cols;
  emit(c, to_json(d).dump(2) + "\n");
  return 0;
}

int run_hard_verify(const Config& c) {
  HardnessSpec spec{c.rows, c.cols, c.xi, c.seed};
  std::optional<FieldPerturbation> p;
  if (c.perturb_site) p = FieldPerturbation{*c.perturb_site, c.perturb_shift};
  const MappingReport r = verify_2d_mapping(spec, c.tol, p);
  emit(c, to_json(r).dump(2) + "\n");
  if (!r.ok) {
    std::cerr << "mapping violation: fidelity " << r.fidelity << " < 1 - " << r.tolerance << "\n";
    return 1;
  }
  return 0;
}

int run_gatecount(const Config& c) {
  ComplexityQuery q{c.n, c.t, c.xi, c.eps, c.q};
  if (c.n < 1) throw UsageError("--n is required");
  if (!c.sweep) {
    const ComplexityReport r = circuit_complexity_bound(q);
    emit(c, to_json(r).dump(2) + "\n");
    return r.feasible ? 0 : 1;
  }
  if (c.points < 2 || !(c.t_min > 0.0) || !(c.t_max > c.t_min)) throw UsageError("sweep needs 0 < t-min < t-max, points >= 2");
  std::string text = "t,total_bound\n";
  for (int i = 0; i < c.points; ++i) {
    q.t = c.t_min * std::pow(c.t_max / c.t_min, static_cast<double>(i) / (c.points - 1));
    const ComplexityReport r = circuit_complexity_bound(q);
    if (!r.feasible) throw DomainError(r.reason);
    text += csv_double(q.t) + "," + csv_double(r.total_bound) + "\n";
  }
  emit(c, text);
  return 0;
}

int run_verify(const Config& c) {
  if (c.n < 1) throw UsageError("--n is required");
  check_dense_feasible(c.n);
  const TruncationRadii radii = radii_override(c).value_or(TruncationRadii{std::min(3, c.n), std::min(2, c.n)});
  json report;
  report["n_sites"] = c.n;
  report["xi"] = c.xi;
  report["t"] = c.t;
  report["r_J"] = radii.r_J;
  report["r_U"] = radii.r_U;
  report["trials"] = json::array();
  double worst = 0.0;
  for (int trial = 0; trial < c.trials; ++trial) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(trial);
    MblInstance inst = build_random_instance({c.n, c.xi, c.q}, seed, default_max_body(c.n));
    const OutcomeDistribution d = exact_distribution(inst, c.t, radii);
    StrongSimulator sim(SimulationRequest{inst, c.t, c.eps, radii});
    sim.max_legs = c.max_legs;
    double trial_worst = 0.0;
    for (std::size_t z = 0; z < d.probabilities.size(); ++z) {
      const std::string bits = bitstring(c.n, z);
      double chain = 1.0;
      for (int site = 1; site <= c.n && chain > kDegenerateMass; ++site) {
        const double p0 = sim.conditional_probability(bits.substr(0, static_cast<std::size_t>(site - 1)), site);
        chain *= bits[static_cast<std::size_t>(site - 1)] == '0' ? p0 : 1.0 - p0;
      }
      trial_worst = std::max(trial_worst, std::abs(chain - d[z]));
    }
    worst = std::max(worst, trial_worst);
    report["trials"].push_back({{"seed", seed}, {"max_discrepancy", trial_worst}});
  }
  report["max_discrepancy"] = worst;
  report["tolerance"] = 1e-10;
  report["ok"] = worst <= 1e-10;
  emit(c, report.dump(2) + "\n");
  return worst <= 1e-10 ? 0 : 1;
}

// Splices keys of a JSON config object into argv as flags, after the
// subcommand and before the user's flags, so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw UsageError("--config needs a path");
  const std::string path = *(it + 1);
  args.erase(it, it + 2);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception&) {
    throw UsageError("config file '" + path + "' is not valid JSON");
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> injected;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
      continue;
    }
    injected.push_back(flag);
    injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  const auto pos = args.empty() ? args.end() : args.begin() + 1;
  args.insert(pos, injected.begin(), injected.end());
  return args;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--out", c.out, "Output path (atomic write); stdout if omitted");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "jsonl"}));
}

void add_sim(CLI::App* sub, Config& c) {
  sub->add_option("--instance", c.instance, "Instance descriptor JSON");
  sub->add_option("--t", c.t, "Evolution time");
  sub->add_option("--eps", c.eps, "TVD budget in (0, 1)");
  sub->add_option("--rj", c.rj, "Coupling truncation radius (overrides radius selection)");
  sub->add_option("--ru", c.ru, "Constituent width cutoff (overrides radius selection)");
  sub->add_option("--max-legs", c.max_legs, "Largest intermediate tensor, in legs");
}

void add_params(CLI::App* sub, Config& c) {
  sub->add_option("--n", c.n, "Number of sites");
  sub->add_option("--xi", c.xi, "Localization length");
  sub->add_option("--q", c.q, "Closeness constant");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liomsim: simulation of chains given by local integrals of motion"};
  app.require_subcommand(1);
  app.footer("Any subcommand accepts --config FILE: a JSON object of flag values; explicit flags override it.");
  Config c;

  auto* gen = app.add_subcommand("gen", "Emit an instance descriptor");
  add_params(gen, c);
  add_common(gen, c);
  gen->add_option("--seed", c.seed, "Instance seed");
  gen->add_option("--max-body", c.max_body, "Largest coupling order (default min(N, 6))");
  gen->add_option("--kind", c.kind, "random or explicit");
  gen->add_option("--max-range", c.max_range, "explicit: list couplings with range below this");
  gen->add_option("--max-width", c.max_width, "explicit: list constituents up to this width");

  auto* bound = app.add_subcommand("bound", "Truncation bound and radii as CSV");
  add_params(bound, c);
  add_sim(bound, c);
  add_common(bound, c);

  auto* expect = app.add_subcommand("expect", "Expectation value of an observable product");
  add_sim(expect, c);
  add_common(expect, c);
  expect->add_option("--pivot", c.pivot, "Pivot site");
  expect->add_option("--pauli", c.pauli, "Pivot operator: z, p0, p1 or none");
  expect->add_option("--prefix", c.prefix, "Projector outcomes on sites 1..len");

  auto* samp = app.add_subcommand("sample", "Chain-rule samples as JSONL");
  add_sim(samp, c);
  add_common(samp, c);
  samp->add_option("--samples", c.samples, "Number of samples");
  samp->add_option("--seed", c.seed, "Sampling seed");

  auto* hgen = app.add_subcommand("hard-gen", "Emit a 2D IQP hardness instance descriptor");
  add_common(hgen, c);
  hgen->add_option("--rows", c.rows, "Grid rows")->required();
  hgen->add_option("--cols", c.cols, "Grid columns")->required();
  hgen->add_option("--xi", c.xi, "Localization length");
  hgen->add_option("--seed", c.seed, "Field seed");

  auto* hver = app.add_subcommand("hard-verify", "Check the 1D-to-2D mapping densely");
  add_common(hver, c);
  hver->add_option("--rows", c.rows, "Grid rows")->required();
  hver->add_option("--cols", c.cols, "Grid columns")->required();
  hver->add_option("--xi", c.xi, "Localization length");
  hver->add_option("--seed", c.seed, "Field seed");
  hver->add_option("--tol", c.tol, "Fidelity tolerance");
  hver->add_option("--perturb-site", c.perturb_site, "Move one field off the allowed set");
  hver->add_option("--perturb-shift", c.perturb_shift, "Shift of the scaled field");

  auto* gc = app.add_subcommand("gatecount", "Circuit complexity bound");
  add_common(gc, c);
  gc->add_option("--n", c.n, "Number of sites");
  gc->add_option("--t", c.t, "Evolution time");
  gc->add_option("--xi", c.xi, "Localization length");
  gc->add_option("--eps", c.eps, "Error budget");
  gc->add_option("--q", c.q, "Closeness constant");
  gc->add_flag("--sweep", c.sweep, "CSV of (t, total_bound) over a log grid");
  gc->add_option("--t-min", c.t_min, "Sweep start");
  gc->add_option("--t-max", c.t_max, "Sweep end");
  gc->add_option("--points", c.points, "Sweep points");

  auto* ver = app.add_subcommand("verify", "Tensor-network vs dense-oracle equivalence on random instances");
  add_params(ver, c);
  add_sim(ver, c);
  add_common(ver, c);
  ver->add_option("--trials", c.trials, "Number of random instances");
  ver->add_option("--seed", c.seed, "First instance seed");

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(c);
    if (*bound) return run_bound(c);
    if (*expect) return run_expect(c);
    if (*samp) return run_sample(c);
    if (*hgen) return run_hard_gen(c);
    if (*hver) return run_hard_verify(c);
    if (*gc) return run_gatecount(c);
    if (*ver) return run_verify(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const FeasibilityError& e) {
    std::cerr << "feasibility error: " << e.what() << "\n";
    return 1;
  } catch (const liomsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
