// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linebal/model.hpp"

namespace linebal::planning {

// One row of the capacity requirement plan: demand translated into machine
// loading against the per-task station allocation.
struct CapacityPlanRow {
  std::string task_id;
  std::string resource_id;
  double cycle_time = 0.0;          // seconds per piece
  double loading = 0.0;             // cycle_time * demand, seconds
  double requested_machines = 0.0;  // loading / daily capacity per machine
  std::int64_t available_machines = 0;
  double shortage = 0.0;            // available - requested; negative = short
};

enum class WipFlag { Overstock, LessStock };

struct ThroughputRow {
  std::string task_id;
  double cycle_time = 0.0;     // seconds per piece at one station
  std::int64_t stations = 1;
  double effective_cycle = 0.0;              // cycle_time / stations
  std::optional<std::int64_t> daily_output;  // floor(workday / effective); empty = unbounded
  WipFlag wip_flag = WipFlag::LessStock;
};

struct ThroughputReport {
  std::vector<ThroughputRow> rows;
  std::optional<std::int64_t> line_throughput;  // min bounded daily output
};

struct CostSheetRow {
  std::string task_id;
  std::int64_t online_qty = 0;
  double online_rate = 0.0;
  std::int64_t offline_qty = 0;
  double offline_rate = 0.0;
  double row_total = 0.0;  // RMB
};

struct CostSheet {
  std::vector<CostSheetRow> rows;
  double total = 0.0;  // RMB
};

struct ComparisonReport {
  double baseline_cost = 0.0;
  double optimized_cost = 0.0;
  double saving_percent = 0.0;  // positive when the new plan is cheaper
};

// One dotted-path scenario override, e.g. task.T37.demand=800 or
// resource.Single Sewing MC.machines=12.
struct Override {
  enum class Root { Task, Resource };
  Root root = Root::Task;
  std::string id;
  std::string field;  // demand | online_rate | offline_rate | machines | capacity
  double value = 0.0;
};

using OverrideSet = std::vector<Override>;

// Requires the scenario's layout (per-task station counts) and exactly one
// consumed resource per task.
std::vector<CapacityPlanRow> capacity_requirement_plan(const model::Scenario& scenario);

// Pre-balance throughput: effective cycle per task under the station
// allocation, floor-division daily output, and the bottleneck line rate.
ThroughputReport throughput_analysis(const model::Scenario& scenario,
                                     const model::LayoutSpec& layout);

// The do-nothing plan: every piece produced offline.
model::BalancingPlan all_offline_baseline(const model::Scenario& scenario);

// Recomputes per-row and total costs from quantities and rates; the total
// must agree with the plan's within 1e-6.
CostSheet cost_sheet(const model::BalancingPlan& plan, const model::Scenario& scenario);

// (old - new) / old * 100; positive when the new cost is lower. old must be > 0.
double cost_saving(double old_cost, double new_cost);

// Parses "task.<id>.<field>=<value>" / "resource.<id>.<field>=<value>".
Override parse_override(std::string_view text);

// Returns a copy of the scenario with the overrides applied and validated.
model::Scenario apply_overrides(const model::Scenario& scenario, const OverrideSet& overrides);

// Re-solves with overrides applied; baseline is the original scenario's
// optimum so the report isolates the override's effect.
ComparisonReport whatif(const model::Scenario& scenario, const OverrideSet& overrides,
                        const milp::SolveOptions& options = {});

const char* to_string(WipFlag flag);

}  // namespace linebal::planning
