// SPDX-License-Identifier: Apache-2.0

#include "linebal/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "linebal/errors.hpp"

namespace linebal::model {

namespace {

bool is_integral_value(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

std::string size_estimate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

void ConsumptionMatrix::set(std::string task_id, std::string resource_id,
                            double seconds_per_piece) {
  entries_[{std::move(task_id), std::move(resource_id)}] = seconds_per_piece;
}

double ConsumptionMatrix::seconds(std::string_view task_id, std::string_view resource_id) const {
  const auto it = entries_.find({std::string(task_id), std::string(resource_id)});
  return it == entries_.end() ? 0.0 : it->second;
}

const TaskSpec* Scenario::find_task(std::string_view id) const {
  for (const TaskSpec& t : tasks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const ResourceSpec* Scenario::find_resource(std::string_view id) const {
  for (const ResourceSpec& r : resources) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void validate(const Scenario& s) {
  if (s.tasks.empty()) throw ValidationError("scenario has no tasks");
  std::set<std::string> task_ids;
  for (const TaskSpec& t : s.tasks) {
    if (t.id.empty()) throw ValidationError("task with empty id");
    if (!task_ids.insert(t.id).second) throw ValidationError("duplicate task id \"" + t.id + "\"");
    if (t.demand < 0) throw ValidationError("task \"" + t.id + "\": negative demand");
    if (!(t.online_cost_rate >= 0.0) || !std::isfinite(t.online_cost_rate))
      throw ValidationError("task \"" + t.id + "\": online cost rate must be finite and >= 0");
    if (!(t.offline_cost_rate >= 0.0) || !std::isfinite(t.offline_cost_rate))
      throw ValidationError("task \"" + t.id + "\": offline cost rate must be finite and >= 0");
  }
  std::set<std::string> resource_ids;
  for (const ResourceSpec& r : s.resources) {
    if (r.id.empty()) throw ValidationError("resource with empty id");
    if (!resource_ids.insert(r.id).second)
      throw ValidationError("duplicate resource id \"" + r.id + "\"");
    if (r.available_machines < 0)
      throw ValidationError("resource \"" + r.id + "\": negative machine count");
    if (!(r.daily_capacity_per_machine > 0.0) || !std::isfinite(r.daily_capacity_per_machine))
      throw ValidationError("resource \"" + r.id + "\": daily capacity must be finite and > 0");
  }
  for (const auto& [key, value] : s.consumption.entries()) {
    if (!task_ids.count(key.first))
      throw ValidationError("consumption entry references unknown task \"" + key.first + "\"");
    if (!resource_ids.count(key.second))
      throw ValidationError("consumption entry for task \"" + key.first +
                            "\" references unknown resource \"" + key.second + "\"");
    if (!(value >= 0.0) || !std::isfinite(value))
      throw ValidationError("consumption entry (" + key.first + ", " + key.second +
                            ") must be finite and >= 0");
  }
  if (s.layout) {
    if (!(s.layout->workday_seconds > 0.0) || !std::isfinite(s.layout->workday_seconds))
      throw ValidationError("layout workday must be finite and > 0");
    for (const auto& [task_id, count] : s.layout->stations) {
      if (!task_ids.count(task_id))
        throw ValidationError("layout references unknown task \"" + task_id + "\"");
      if (count < 1)
        throw ValidationError("layout station count for task \"" + task_id + "\" must be >= 1");
    }
    for (const TaskSpec& t : s.tasks) {
      if (!s.layout->stations.count(t.id))
        throw ValidationError("layout is missing a station count for task \"" + t.id + "\"");
    }
  }
}

milp::MilpProblem build_milp(const Scenario& s) {
  validate(s);
  const std::size_t n = s.tasks.size();
  milp::MilpProblem p = milp::MilpProblem::with_vars(2 * n);

  for (std::size_t i = 0; i < n; ++i) {
    const TaskSpec& task = s.tasks[i];
    p.costs[i] = task.online_cost_rate;
    p.costs[n + i] = task.offline_cost_rate;
    p.integral[i] = 1;
    p.integral[n + i] = 1;

    // I_p fits both the demand and every consumed resource's whole budget.
    double online_cap = static_cast<double>(task.demand);
    for (const ResourceSpec& r : s.resources) {
      const double sec = s.consumption.seconds(task.id, r.id);
      if (sec > 0.0) online_cap = std::min(online_cap, std::floor(r.budget_seconds() / sec));
    }
    p.upper_bounds[i] = online_cap;
    p.upper_bounds[n + i] = static_cast<double>(task.demand);
  }

  for (std::size_t i = 0; i < n; ++i) {
    milp::LinearConstraint demand;
    demand.coefficients.assign(2 * n, 0.0);
    demand.coefficients[i] = 1.0;
    demand.coefficients[n + i] = 1.0;
    demand.relation = milp::Relation::GE;
    demand.rhs = static_cast<double>(s.tasks[i].demand);
    p.constraints.push_back(std::move(demand));
  }

  for (const ResourceSpec& r : s.resources) {
    milp::LinearConstraint capacity;
    capacity.coefficients.assign(2 * n, 0.0);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double sec = s.consumption.seconds(s.tasks[i].id, r.id);
      if (sec > 0.0) {
        capacity.coefficients[i] = sec;
        any = true;
      }
    }
    if (!any) continue;  // capacity can never bind
    capacity.relation = milp::Relation::LE;
    capacity.rhs = r.budget_seconds();
    p.constraints.push_back(std::move(capacity));
  }
  return p;
}

namespace {

BalancingPlan plan_from_quantities(const Scenario& s, const std::vector<std::int64_t>& online,
                                   const std::vector<std::int64_t>& offline) {
  BalancingPlan plan;
  plan.rows.reserve(s.tasks.size());
  double total = 0.0;
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const TaskSpec& t = s.tasks[i];
    PlanRow row;
    row.task_id = t.id;
    row.online_qty = online[i];
    row.offline_qty = offline[i];
    row.row_cost = t.online_cost_rate * static_cast<double>(online[i]) +
                   t.offline_cost_rate * static_cast<double>(offline[i]);
    total += row.row_cost;
    plan.rows.push_back(std::move(row));
  }
  plan.total_cost = total;

  plan.resource_usage.reserve(s.resources.size());
  for (const ResourceSpec& r : s.resources) {
    ResourceUsage usage;
    usage.resource_id = r.id;
    usage.budget_seconds = r.budget_seconds();
    for (std::size_t i = 0; i < s.tasks.size(); ++i) {
      usage.used_seconds +=
          s.consumption.seconds(s.tasks[i].id, r.id) * static_cast<double>(online[i]);
    }
    usage.utilization = usage.budget_seconds > 0.0 ? usage.used_seconds / usage.budget_seconds : 0.0;
    plan.resource_usage.push_back(std::move(usage));
  }
  return plan;
}

void check_plan_invariants(const Scenario& s, const BalancingPlan& plan) {
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const PlanRow& row = plan.rows[i];
    if (row.online_qty < 0 || row.offline_qty < 0)
      throw ValidationError("plan row \"" + row.task_id + "\": negative quantity");
    if (row.online_qty + row.offline_qty < s.tasks[i].demand)
      throw ValidationError("plan row \"" + row.task_id + "\": demand not met");
  }
  for (const ResourceUsage& usage : plan.resource_usage) {
    if (usage.used_seconds > usage.budget_seconds + 1e-6)
      throw ValidationError("plan exceeds capacity of resource \"" + usage.resource_id + "\"");
  }
}

}  // namespace

BalancingPlan decode_plan(const Scenario& s, const milp::MilpSolution& solution) {
  validate(s);
  if (solution.status != milp::MilpStatus::Optimal)
    throw ValidationError(std::string("decode_plan requires an Optimal solution, got ") +
                          milp::to_string(solution.status));
  const std::size_t n = s.tasks.size();
  if (solution.values.size() != 2 * n)
    throw ValidationError("solution has " + std::to_string(solution.values.size()) +
                          " values, expected " + std::to_string(2 * n));

  std::vector<std::int64_t> online(n), offline(n);
  for (std::size_t i = 0; i < n; ++i) {
    online[i] = std::llround(solution.values[i]);
    offline[i] = std::llround(solution.values[n + i]);
  }
  BalancingPlan plan = plan_from_quantities(s, online, offline);
  if (std::abs(plan.total_cost - solution.objective) > 1e-6)
    throw ValidationError("recomputed plan cost " + std::to_string(plan.total_cost) +
                          " does not match solver objective " + std::to_string(solution.objective));
  check_plan_invariants(s, plan);
  return plan;
}

BalancingPlan knapsack_oracle(const Scenario& s) {
  validate(s);
  const std::size_t n = s.tasks.size();

  // Group tasks by their single resource.
  std::vector<int> task_resource(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < s.resources.size(); ++r) {
      const double sec = s.consumption.seconds(s.tasks[i].id, s.resources[r].id);
      if (sec <= 0.0) continue;
      if (task_resource[i] >= 0)
        throw ValidationError("knapsack_oracle: task \"" + s.tasks[i].id +
                              "\" consumes more than one resource");
      if (!is_integral_value(sec))
        throw ValidationError("knapsack_oracle: cycle time of task \"" + s.tasks[i].id +
                              "\" is not an integral number of seconds");
      task_resource[i] = static_cast<int>(r);
    }
    if (task_resource[i] < 0)
      throw ValidationError("knapsack_oracle: task \"" + s.tasks[i].id +
                            "\" consumes no resource");
  }

  std::vector<std::int64_t> online(n, 0), offline(n, 0);
  for (std::size_t i = 0; i < n; ++i) offline[i] = s.tasks[i].demand;

  for (std::size_t r = 0; r < s.resources.size(); ++r) {
    const double budget = s.resources[r].budget_seconds();
    if (!is_integral_value(budget))
      throw ValidationError("knapsack_oracle: budget of resource \"" + s.resources[r].id +
                            "\" is not an integral number of seconds");
    if (budget > 1e7)
      throw ValidationError("knapsack_oracle: budget of resource \"" + s.resources[r].id +
                            "\" is about " + size_estimate(budget) +
                            " seconds, above the 1e7 limit");
    const auto capacity = static_cast<std::int64_t>(std::llround(budget));

    // Bounded knapsack: maximize the saving (offline - online rate) per piece
    // moved onto the line. Binary-split piece counts into 0/1 items.
    struct Item {
      std::size_t task;
      std::int64_t pieces;
      std::int64_t weight;
      double gain;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < n; ++i) {
      if (task_resource[i] != static_cast<int>(r)) continue;
      const TaskSpec& t = s.tasks[i];
      const double gain_per_piece = t.offline_cost_rate - t.online_cost_rate;
      if (gain_per_piece <= 0.0 || t.demand == 0) continue;  // never worth moving online
      const auto weight =
          static_cast<std::int64_t>(std::llround(s.consumption.seconds(t.id, s.resources[r].id)));
      std::int64_t remaining = t.demand;
      std::int64_t chunk = 1;
      while (remaining > 0) {
        const std::int64_t pieces = std::min(chunk, remaining);
        items.push_back({i, pieces, pieces * weight, gain_per_piece * static_cast<double>(pieces)});
        remaining -= pieces;
        chunk *= 2;
      }
    }
    if (items.empty() || capacity <= 0) continue;

    const double cells = static_cast<double>(items.size()) * static_cast<double>(capacity + 1);
    if (cells > 2e9)
      throw ValidationError("knapsack_oracle: DP table for resource \"" + s.resources[r].id +
                            "\" needs about " + size_estimate(cells) + " cells; too large");

    const std::size_t width = static_cast<std::size_t>(capacity) + 1;
    std::vector<double> best(width, 0.0);
    std::vector<std::vector<bool>> taken(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) {
      taken[k].assign(width, false);
      const Item& item = items[k];
      if (item.weight > capacity) continue;
      for (std::size_t w = width; w-- > static_cast<std::size_t>(item.weight);) {
        const double candidate = best[w - static_cast<std::size_t>(item.weight)] + item.gain;
        if (candidate > best[w]) {
          best[w] = candidate;
          taken[k][w] = true;
        }
      }
    }

    std::size_t w = width - 1;
    for (std::size_t k = items.size(); k-- > 0;) {
      if (!taken[k][w]) continue;
      online[items[k].task] += items[k].pieces;
      offline[items[k].task] -= items[k].pieces;
      w -= static_cast<std::size_t>(items[k].weight);
    }
  }

  BalancingPlan plan = plan_from_quantities(s, online, offline);
  check_plan_invariants(s, plan);
  return plan;
}

BalancingPlan solve_scenario(const Scenario& scenario, const milp::SolveOptions& options) {
  const milp::MilpProblem problem = build_milp(scenario);
  const milp::MilpSolution solution = milp::solve_milp(problem, options);
  if (solution.status != milp::MilpStatus::Optimal)
    throw SolverError(std::string("scenario solve ended with status ") +
                      milp::to_string(solution.status));
  return decode_plan(scenario, solution);
}

}  // namespace linebal::model
