// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "linebal/milp.hpp"
#include "linebal/model.hpp"
#include "linebal/report_io.hpp"

namespace testutil {

namespace milp = linebal::milp;
namespace model = linebal::model;

inline std::string data_dir() { return LINEBAL_DATA_DIR; }

inline linebal::report_io::ScenarioFiles style_a_files() {
  const std::string base = data_dir() + "/style_a";
  return {base + "/process_sheet.csv", base + "/resources.csv", base + "/scenario.json"};
}

inline model::Scenario load_style_a() {
  return linebal::report_io::load_scenario(style_a_files());
}

// ---------------------------------------------------------------------------
// Frozen case-study expectations (capacity plan, throughput, optimized plan).

struct CapacityExpect {
  const char* task;
  const char* resource;
  double cycle;
  double loading;
  const char* requested_2dp;
  long long available;
  bool shortage_negative;
};

inline const std::vector<CapacityExpect>& capacity_expectations() {
  static const std::vector<CapacityExpect> rows = {
      {"T19", "Manual", 30, 27000, "0.94", 1, false},
      {"T20", "Cutting Tools", 40, 36000, "1.25", 1, true},
      {"T21", "Manual", 60, 54000, "1.88", 2, false},
      {"T22", "Single Sewing MC", 40, 36000, "1.25", 1, true},
      {"T23", "Single Sewing MC", 25, 22500, "0.78", 1, false},
      {"T24", "Manual", 20, 18000, "0.63", 1, false},
      {"T25", "Template Sewing MC", 50, 45000, "1.56", 2, false},
      {"T35", "Manual", 60, 54000, "1.88", 2, false},
      {"T36", "Single Sewing MC", 60, 54000, "1.88", 2, false},
      {"T37", "Single Sewing MC", 120, 108000, "3.75", 3, true},
      {"T38", "Single Sewing MC", 40, 36000, "1.25", 1, true},
      {"T39", "Single Sewing MC", 80, 72000, "2.50", 2, true},
      {"T40", "Overlock MC", 110, 99000, "3.44", 3, true},
      {"T41", "Single Sewing MC", 30, 27000, "0.94", 1, false},
      {"T42", "Manual", 60, 54000, "1.88", 2, false},
      {"T43", "Manual", 80, 72000, "2.50", 2, true},
      {"T44", "Vertical Head Sewing MC", 80, 72000, "2.50", 2, true},
      {"T45", "Manual", 70, 63000, "2.19", 2, true},
      {"T46", "Buttoning MC", 35, 31500, "1.09", 1, true},
  };
  return rows;
}

struct ThroughputExpect {
  const char* task;
  long long stations;
  const char* effective_1dp;
  long long daily_output;  // floor convention: T45/T46 are 822, not the printed 823
  bool overstock;
};

inline const std::vector<ThroughputExpect>& throughput_expectations() {
  static const std::vector<ThroughputExpect> rows = {
      {"T19", 1, "30.0", 960, true},  {"T20", 1, "40.0", 720, false},
      {"T21", 2, "30.0", 960, true},  {"T22", 1, "40.0", 720, false},
      {"T23", 1, "25.0", 1152, true}, {"T24", 1, "20.0", 1440, true},
      {"T25", 2, "25.0", 1152, true}, {"T35", 2, "30.0", 960, true},
      {"T36", 2, "30.0", 960, true},  {"T37", 3, "40.0", 720, false},
      {"T38", 1, "40.0", 720, false}, {"T39", 2, "40.0", 720, false},
      {"T40", 3, "36.7", 785, false}, {"T41", 1, "30.0", 960, true},
      {"T42", 2, "30.0", 960, true},  {"T43", 2, "40.0", 720, false},
      {"T44", 2, "40.0", 720, false}, {"T45", 2, "35.0", 822, false},
      {"T46", 1, "35.0", 822, false},
  };
  return rows;
}

struct PatternExpect {
  const char* task;
  long long online;
  long long offline;
};

// Published optimal split; every task not listed runs fully online (900/0).
inline const std::vector<PatternExpect>& published_pattern() {
  static const std::vector<PatternExpect> rows = {
      {"T20", 720, 180}, {"T37", 577, 323}, {"T40", 785, 115}, {"T44", 720, 180}, {"T46", 822, 78},
  };
  return rows;
}

// 14 tasks fully online plus the five capped ones; 876 pieces offline.
inline double expected_optimal_cost() { return 16224 * 0.013 + 876 * 0.035; }
inline double expected_baseline_cost() { return 19 * 900 * 0.035; }

// ---------------------------------------------------------------------------
// Independent feasibility check (kept separate from the solver's own).

inline double eval_violation(const milp::MilpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) lhs += c.coefficients[i] * x[i];
    double v = 0.0;
    if (c.relation == milp::Relation::LE) v = lhs - c.rhs;
    if (c.relation == milp::Relation::GE) v = c.rhs - lhs;
    if (c.relation == milp::Relation::EQ) v = std::abs(lhs - c.rhs);
    if (v > worst) worst = v;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (p.lower_bounds[i] - x[i] > worst) worst = p.lower_bounds[i] - x[i];
    if (x[i] - p.upper_bounds[i] > worst) worst = x[i] - p.upper_bounds[i];
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Random instance generators (fixed seeds keep the suites reproducible).

inline milp::MilpProblem random_milp(std::mt19937& rng) {
  std::uniform_int_distribution<int> nvars(1, 5);
  std::uniform_int_distribution<int> nrows(0, 6);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> bound(0, 10);
  std::uniform_int_distribution<int> rel(0, 2);
  std::uniform_int_distribution<int> loose_rhs(-25, 25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n = nvars(rng);
  milp::MilpProblem p = milp::MilpProblem::with_vars(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int a = bound(rng);
    const int b = bound(rng);
    p.lower_bounds[static_cast<std::size_t>(i)] = std::min(a, b);
    p.upper_bounds[static_cast<std::size_t>(i)] = std::max(a, b);
    p.costs[static_cast<std::size_t>(i)] = coef(rng);
    p.integral[static_cast<std::size_t>(i)] = 1;
  }
  // An interior point keeps a healthy share of instances feasible.
  std::vector<double> anchor(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<long long> in_box(
        static_cast<long long>(p.lower_bounds[static_cast<std::size_t>(i)]),
        static_cast<long long>(p.upper_bounds[static_cast<std::size_t>(i)]));
    anchor[static_cast<std::size_t>(i)] = static_cast<double>(in_box(rng));
  }
  const int m = nrows(rng);
  for (int k = 0; k < m; ++k) {
    milp::LinearConstraint c;
    c.coefficients.resize(static_cast<std::size_t>(n));
    double at_anchor = 0.0;
    for (int i = 0; i < n; ++i) {
      c.coefficients[static_cast<std::size_t>(i)] = coef(rng);
      at_anchor += c.coefficients[static_cast<std::size_t>(i)] * anchor[static_cast<std::size_t>(i)];
    }
    const int r = rel(rng);
    c.relation = r == 0 ? milp::Relation::LE : (r == 1 ? milp::Relation::GE : milp::Relation::EQ);
    c.rhs = unit(rng) < 0.7 ? at_anchor : static_cast<double>(loose_rhs(rng));
    p.constraints.push_back(std::move(c));
  }
  return p;
}

// Single-resource-per-task scenario suitable for the knapsack oracle.
inline model::Scenario random_scenario(std::mt19937& rng) {
  std::uniform_int_distribution<int> ntasks(1, 8);
  std::uniform_int_distribution<int> nresources(1, 3);
  std::uniform_int_distribution<int> demand(0, 50);
  std::uniform_int_distribution<int> rate_millis(0, 100);
  std::uniform_int_distribution<int> cycle(1, 60);
  std::uniform_int_distribution<int> machines(0, 4);
  std::uniform_int_distribution<int> capacity(100, 1200);

  model::Scenario s;
  const int r = nresources(rng);
  for (int k = 0; k < r; ++k) {
    model::ResourceSpec res;
    res.id = "R" + std::to_string(k);
    res.available_machines = machines(rng);
    res.daily_capacity_per_machine = capacity(rng);
    s.resources.push_back(std::move(res));
  }
  const int t = ntasks(rng);
  std::uniform_int_distribution<int> pick(0, r - 1);
  for (int k = 0; k < t; ++k) {
    model::TaskSpec task;
    task.id = "T" + std::to_string(k);
    task.description = "task " + std::to_string(k);
    task.demand = demand(rng);
    task.online_cost_rate = rate_millis(rng) / 1000.0;
    task.offline_cost_rate = rate_millis(rng) / 1000.0;
    s.tasks.push_back(task);
    s.consumption.set(task.id, s.resources[static_cast<std::size_t>(pick(rng))].id,
                      static_cast<double>(cycle(rng)));
  }
  return s;
}

// ---------------------------------------------------------------------------
// CLI driver

struct CliResult {
  int exit_code = -1;
  std::string output;
};

inline CliResult run_cli(const std::string& args, bool capture_stderr = false) {
  const std::string cmd =
      std::string(LINEBAL_CLI_PATH) + " " + args + (capture_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

inline std::string style_a_args() {
  const std::string base = data_dir() + "/style_a";
  return "--process-sheet " + base + "/process_sheet.csv --resources " + base +
         "/resources.csv --scenario " + base + "/scenario.json";
}

}  // namespace testutil
