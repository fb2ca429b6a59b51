// SPDX-License-Identifier: Apache-2.0

#include "linebal/planning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "linebal/errors.hpp"

namespace linebal::planning {

namespace {

// The single resource a task consumes, with its cycle time.
struct TaskResource {
  std::string resource_id;
  double cycle_time = 0.0;
};

TaskResource single_resource(const model::Scenario& s, const model::TaskSpec& task) {
  TaskResource found;
  bool any = false;
  for (const model::ResourceSpec& r : s.resources) {
    const double sec = s.consumption.seconds(task.id, r.id);
    if (sec <= 0.0) continue;
    if (any)
      throw ValidationError("task \"" + task.id +
                            "\" consumes more than one resource; use a per-resource breakdown");
    found = {r.id, sec};
    any = true;
  }
  if (!any)
    throw ValidationError("task \"" + task.id + "\" consumes no resource");
  return found;
}

double total_cycle_time(const model::Scenario& s, const model::TaskSpec& task) {
  double total = 0.0;
  for (const model::ResourceSpec& r : s.resources) total += s.consumption.seconds(task.id, r.id);
  return total;
}

// floor(workday / effective_cycle) adjusted so the defining inequality
// output * cycle <= workday < (output + 1) * cycle holds exactly in floating
// point.
std::int64_t floor_output(double workday, double effective_cycle) {
  auto output = static_cast<std::int64_t>(std::floor(workday / effective_cycle));
  while (static_cast<double>(output + 1) * effective_cycle <= workday) ++output;
  while (output > 0 && static_cast<double>(output) * effective_cycle > workday) --output;
  return output;
}

double parse_numeric(std::string_view text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError(what + ": cannot parse \"" + std::string(text) + "\" as a number");
  return value;
}

}  // namespace

std::vector<CapacityPlanRow> capacity_requirement_plan(const model::Scenario& s) {
  model::validate(s);
  if (!s.layout)
    throw ValidationError(
        "capacity plan requires a station allocation (scenario \"stations\" setting)");

  std::vector<CapacityPlanRow> rows;
  rows.reserve(s.tasks.size());
  for (const model::TaskSpec& task : s.tasks) {
    const TaskResource tr = single_resource(s, task);
    const model::ResourceSpec* resource = s.find_resource(tr.resource_id);
    CapacityPlanRow row;
    row.task_id = task.id;
    row.resource_id = tr.resource_id;
    row.cycle_time = tr.cycle_time;
    row.loading = tr.cycle_time * static_cast<double>(task.demand);
    row.requested_machines = row.loading / resource->daily_capacity_per_machine;
    row.available_machines = s.layout->stations.at(task.id);
    row.shortage = static_cast<double>(row.available_machines) - row.requested_machines;
    rows.push_back(std::move(row));
  }
  return rows;
}

ThroughputReport throughput_analysis(const model::Scenario& s, const model::LayoutSpec& layout) {
  model::validate(s);
  if (!(layout.workday_seconds > 0.0))
    throw ValidationError("layout workday must be > 0");
  for (const model::TaskSpec& task : s.tasks) {
    if (!layout.stations.count(task.id))
      throw ValidationError("layout is missing a station count for task \"" + task.id + "\"");
  }

  ThroughputReport report;
  report.rows.reserve(s.tasks.size());
  for (const model::TaskSpec& task : s.tasks) {
    ThroughputRow row;
    row.task_id = task.id;
    row.cycle_time = total_cycle_time(s, task);
    row.stations = layout.stations.at(task.id);
    if (row.stations < 1)
      throw ValidationError("layout station count for task \"" + task.id + "\" must be >= 1");
    row.effective_cycle = row.cycle_time / static_cast<double>(row.stations);
    if (row.effective_cycle > 0.0) {
      row.daily_output = floor_output(layout.workday_seconds, row.effective_cycle);
      if (!report.line_throughput || *row.daily_output < *report.line_throughput)
        report.line_throughput = row.daily_output;
    }
    // Zero cycle time: unbounded output, excluded from the line minimum.
    const bool covers_demand = !row.daily_output || *row.daily_output >= task.demand;
    row.wip_flag = covers_demand ? WipFlag::Overstock : WipFlag::LessStock;
    report.rows.push_back(std::move(row));
  }
  return report;
}

model::BalancingPlan all_offline_baseline(const model::Scenario& s) {
  model::validate(s);
  model::BalancingPlan plan;
  plan.rows.reserve(s.tasks.size());
  double total = 0.0;
  for (const model::TaskSpec& task : s.tasks) {
    model::PlanRow row;
    row.task_id = task.id;
    row.online_qty = 0;
    row.offline_qty = task.demand;
    row.row_cost = task.offline_cost_rate * static_cast<double>(task.demand);
    total += row.row_cost;
    plan.rows.push_back(std::move(row));
  }
  plan.total_cost = total;
  for (const model::ResourceSpec& r : s.resources) {
    plan.resource_usage.push_back({r.id, 0.0, r.budget_seconds(), 0.0});
  }
  return plan;
}

CostSheet cost_sheet(const model::BalancingPlan& plan, const model::Scenario& s) {
  CostSheet sheet;
  sheet.rows.reserve(plan.rows.size());
  for (const model::PlanRow& row : plan.rows) {
    const model::TaskSpec* task = s.find_task(row.task_id);
    if (!task)
      throw ValidationError("plan row \"" + row.task_id + "\" has no matching scenario task");
    CostSheetRow out;
    out.task_id = row.task_id;
    out.online_qty = row.online_qty;
    out.online_rate = task->online_cost_rate;
    out.offline_qty = row.offline_qty;
    out.offline_rate = task->offline_cost_rate;
    out.row_total = out.online_rate * static_cast<double>(out.online_qty) +
                    out.offline_rate * static_cast<double>(out.offline_qty);
    sheet.total += out.row_total;
    sheet.rows.push_back(std::move(out));
  }
  if (std::abs(sheet.total - plan.total_cost) > 1e-6)
    throw ValidationError("cost sheet total " + std::to_string(sheet.total) +
                          " does not match plan total " + std::to_string(plan.total_cost));
  return sheet;
}

double cost_saving(double old_cost, double new_cost) {
  if (!(old_cost > 0.0))
    throw ValidationError("cost_saving requires a positive old cost, got " +
                          std::to_string(old_cost));
  return (old_cost - new_cost) / old_cost * 100.0;
}

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ValidationError("override \"" + std::string(text) + "\" is missing '='");
  const std::string_view path = text.substr(0, eq);
  const std::string_view value = text.substr(eq + 1);

  const auto first_dot = path.find('.');
  const auto last_dot = path.rfind('.');
  if (first_dot == std::string_view::npos || first_dot == last_dot)
    throw ValidationError("override path \"" + std::string(path) +
                          "\" must look like task.<id>.<field> or resource.<id>.<field>");

  Override o;
  const std::string_view root = path.substr(0, first_dot);
  if (root == "task")
    o.root = Override::Root::Task;
  else if (root == "resource")
    o.root = Override::Root::Resource;
  else
    throw ValidationError("override root \"" + std::string(root) +
                          "\" must be \"task\" or \"resource\"");
  o.id = std::string(path.substr(first_dot + 1, last_dot - first_dot - 1));
  o.field = std::string(path.substr(last_dot + 1));
  if (o.id.empty()) throw ValidationError("override path \"" + std::string(path) + "\" has an empty id");
  o.value = parse_numeric(value, "override \"" + std::string(path) + "\"");
  return o;
}

model::Scenario apply_overrides(const model::Scenario& scenario, const OverrideSet& overrides) {
  model::Scenario out = scenario;
  for (const Override& o : overrides) {
    if (o.root == Override::Root::Task) {
      auto it = std::find_if(out.tasks.begin(), out.tasks.end(),
                             [&](const model::TaskSpec& t) { return t.id == o.id; });
      if (it == out.tasks.end())
        throw ValidationError("override references unknown task \"" + o.id + "\"");
      if (o.field == "demand") {
        it->demand = std::llround(o.value);
      } else if (o.field == "online_rate") {
        it->online_cost_rate = o.value;
      } else if (o.field == "offline_rate") {
        it->offline_cost_rate = o.value;
      } else {
        throw ValidationError("unknown task override field \"" + o.field +
                              "\" (expected demand, online_rate or offline_rate)");
      }
    } else {
      auto it = std::find_if(out.resources.begin(), out.resources.end(),
                             [&](const model::ResourceSpec& r) { return r.id == o.id; });
      if (it == out.resources.end())
        throw ValidationError("override references unknown resource \"" + o.id + "\"");
      if (o.field == "machines") {
        it->available_machines = std::llround(o.value);
      } else if (o.field == "capacity") {
        it->daily_capacity_per_machine = o.value;
      } else {
        throw ValidationError("unknown resource override field \"" + o.field +
                              "\" (expected machines or capacity)");
      }
    }
  }
  model::validate(out);
  return out;
}

ComparisonReport whatif(const model::Scenario& scenario, const OverrideSet& overrides,
                        const milp::SolveOptions& options) {
  const model::BalancingPlan baseline = model::solve_scenario(scenario, options);
  const model::Scenario changed = apply_overrides(scenario, overrides);
  const model::BalancingPlan optimized = model::solve_scenario(changed, options);

  ComparisonReport report;
  report.baseline_cost = baseline.total_cost;
  report.optimized_cost = optimized.total_cost;
  report.saving_percent =
      baseline.total_cost > 0.0 ? cost_saving(baseline.total_cost, optimized.total_cost) : 0.0;
  return report;
}

const char* to_string(WipFlag flag) {
  return flag == WipFlag::Overstock ? "Overstock" : "LessStock";
}

}  // namespace linebal::planning
