// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linebal/milp.hpp"

namespace linebal::model {

inline constexpr double kDefaultWorkdaySeconds = 28800.0;  // 8 h

struct TaskSpec {
  std::string id;           // e.g. "T19"
  std::string description;
  std::int64_t demand = 0;          // pieces per day
  double online_cost_rate = 0.0;    // RMB per piece on the line
  double offline_cost_rate = 0.0;   // RMB per piece off the line

  bool operator==(const TaskSpec&) const = default;
};

struct ResourceSpec {
  std::string id;  // e.g. "Single Sewing MC"
  std::int64_t available_machines = 0;
  double daily_capacity_per_machine = kDefaultWorkdaySeconds;  // seconds

  double budget_seconds() const {
    return static_cast<double>(available_machines) * daily_capacity_per_machine;
  }

  bool operator==(const ResourceSpec&) const = default;
};

// Seconds of each resource consumed per piece of each task; absent entries
// are zero. Keys are (task id, resource id).
class ConsumptionMatrix {
 public:
  using Key = std::pair<std::string, std::string>;

  void set(std::string task_id, std::string resource_id, double seconds_per_piece);
  double seconds(std::string_view task_id, std::string_view resource_id) const;
  const std::map<Key, double>& entries() const { return entries_; }

  bool operator==(const ConsumptionMatrix&) const = default;

 private:
  std::map<Key, double> entries_;
};

// Workstation allocation: how many stations (machines) each task holds on the
// line. Mirrors the per-task "available machines" column of a capacity plan.
struct LayoutSpec {
  double workday_seconds = kDefaultWorkdaySeconds;
  std::map<std::string, std::int64_t> stations;  // task id -> count >= 1

  bool operator==(const LayoutSpec&) const = default;
};

struct Scenario {
  std::vector<TaskSpec> tasks;  // order fixes the MILP variable order
  std::vector<ResourceSpec> resources;
  ConsumptionMatrix consumption;
  std::optional<LayoutSpec> layout;  // present when a station allocation is configured

  const TaskSpec* find_task(std::string_view id) const;
  const ResourceSpec* find_resource(std::string_view id) const;

  bool operator==(const Scenario&) const = default;
};

struct PlanRow {
  std::string task_id;
  std::int64_t online_qty = 0;   // I_p
  std::int64_t offline_qty = 0;  // O_p
  double row_cost = 0.0;         // RMB
};

struct ResourceUsage {
  std::string resource_id;
  double used_seconds = 0.0;
  double budget_seconds = 0.0;
  double utilization = 0.0;  // used/budget; 0 when the budget is 0
};

struct BalancingPlan {
  std::vector<PlanRow> rows;  // task order
  double total_cost = 0.0;    // RMB
  std::vector<ResourceUsage> resource_usage;  // resource order
};

// Throws ValidationError on duplicate ids, dangling references, negative
// values, or an uncovered station allocation.
void validate(const Scenario& scenario);

// Translates a scenario into the minimization MILP: variables I_1..I_n then
// O_1..O_n (all integral, lower bound 0), one >= demand row per task, one
// <= budget row per resource with any nonzero consumption. Online quantities
// are capped by demand and by the tightest single-resource capacity so the
// search lattice is finite.
milp::MilpProblem build_milp(const Scenario& scenario);

// Interprets an Optimal solver result as a plan. Quantities are snapped to
// integers; the recomputed total must match the solver objective within 1e-6.
BalancingPlan decode_plan(const Scenario& scenario, const milp::MilpSolution& solution);

// Independent optimum without the MILP solver: when every task consumes
// exactly one resource and cycle times/budgets are integral seconds, each
// resource reduces to a bounded knapsack solved by dynamic programming over
// capacity seconds. Budgets above 10^7 seconds are rejected.
BalancingPlan knapsack_oracle(const Scenario& scenario);

// build_milp + solve_milp + decode_plan; throws SolverError when the solver
// does not reach Optimal.
BalancingPlan solve_scenario(const Scenario& scenario, const milp::SolveOptions& options = {});

}  // namespace linebal::model
