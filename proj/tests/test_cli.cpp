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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(LIOMSIM_CLI) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "liomsim_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GenAndBound) {
  const auto path = scratch() / "gen.json";
  ASSERT_EQ(run("gen --n 6 --xi 0.3 --seed 2 --out " + path.string()).status, 0);
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j.at("n_sites"), 6);
  const RunResult b = run("bound --instance " + path.string() + " --t 1 --eps 0.05");
  ASSERT_EQ(b.status, 0);
  EXPECT_EQ(b.out.rfind("N,xi,q,r_J,r_U,term_J,term_U,total,epsilon_over_t\n", 0), 0u);
}

TEST(Cli, BoundThenSample) {
  const auto path = scratch() / "pipe.json";
  ASSERT_EQ(run("gen --n 4 --xi 0.2 --seed 5 --out " + path.string()).status, 0);
  const RunResult b = run("bound --instance " + path.string() + " --t 1 --eps 0.05");
  ASSERT_EQ(b.status, 0);
  std::istringstream rows(b.out);
  std::string header, row, cell;
  std::getline(rows, header);
  std::getline(rows, row);
  std::istringstream cells(row);
  std::vector<std::string> v;
  while (std::getline(cells, cell, ',')) v.push_back(cell);
  ASSERT_EQ(v.size(), 9u);
  const RunResult s = run("sample --instance " + path.string() + " --t 1 --rj " + v[3] + " --ru " + v[4] +
                          " --samples 5 --seed 3");
  ASSERT_EQ(s.status, 0);
  std::istringstream lines(s.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto rec = nlohmann::json::parse(line);
    EXPECT_EQ(rec.at("bits").get<std::string>().size(), 4u);
    EXPECT_EQ(rec.at("index"), count);
    ++count;
  }
  EXPECT_EQ(count, 5);
  EXPECT_EQ(run("sample --instance " + path.string() + " --t 1 --rj " + v[3] + " --ru " + v[4] +
                " --samples 5 --seed 3").out, s.out);
}

TEST(Cli, IdentityFixtureSamplesZeros) {
  const auto path = scratch() / "ident.json";
  std::ofstream(path) << R"({"n_sites": 3, "xi": 0.5, "kind": "explicit", "couplings": [{"sites": [1], "value": 0.4}]})";
  const RunResult s = run("sample --instance " + path.string() + " --t 2 --rj 2 --ru 2 --samples 4 --seed 1");
  ASSERT_EQ(s.status, 0);
  std::istringstream lines(s.out);
  std::string line;
  while (std::getline(lines, line)) EXPECT_EQ(nlohmann::json::parse(line).at("bits"), "000");
}

TEST(Cli, VerifySixSites) {
  const RunResult r = run("verify --n 6 --trials 5 --xi 0.5 --t 1");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("ok").get<bool>());
  EXPECT_LE(j.at("max_discrepancy").get<double>(), 1e-10);
}

TEST(Cli, HardnessAndGatecount) {
  const RunResult v = run("hard-verify --rows 2 --cols 2 --xi 1");
  ASSERT_EQ(v.status, 0);
  EXPECT_TRUE(nlohmann::json::parse(v.out).at("ok").get<bool>());
  EXPECT_EQ(run("hard-verify --rows 2 --cols 2 --xi 1 --perturb-site 1").status, 1);
  const RunResult g = run("gatecount --n 16 --t 1000 --xi 0.15 --eps 0.1");
  ASSERT_EQ(g.status, 0);
  EXPECT_TRUE(nlohmann::json::parse(g.out).at("feasible").get<bool>());
  EXPECT_EQ(run("gatecount --n 16 --t 1000 --xi 0.5 --eps 0.1").status, 1);
  const RunResult sweep = run("gatecount --n 16 --xi 0.15 --eps 0.1 --sweep --points 3");
  ASSERT_EQ(sweep.status, 0);
  EXPECT_EQ(sweep.out.rfind("t,total_bound\n", 0), 0u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("bound --n 4 --xi 2").status, 1);
  EXPECT_EQ(run("bound --n 4 --rj 2").status, 2);
  EXPECT_EQ(run("bound --bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("expect --instance /nonexistent.json").status, 1);
}

TEST(Cli, ConfigFileWithOverride) {
  const auto cfg = scratch() / "cfg.json";
  std::ofstream(cfg) << R"({"n": 5, "xi": 0.2, "t": 1, "eps": 0.05})";
  const RunResult a = run("bound --config " + cfg.string());
  ASSERT_EQ(a.status, 0);
  EXPECT_NE(a.out.find("\n5,0.2"), std::string::npos);
  const RunResult b = run("bound --config " + cfg.string() + " --n 7");
  ASSERT_EQ(b.status, 0);
  EXPECT_NE(b.out.find("\n7,0.2"), std::string::npos);
  EXPECT_EQ(run("bound --config /nonexistent.json").status, 2);
}
