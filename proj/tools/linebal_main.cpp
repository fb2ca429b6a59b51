// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linebal/errors.hpp"
#include "linebal/milp.hpp"
#include "linebal/model.hpp"
#include "linebal/planning.hpp"
#include "linebal/report_io.hpp"

namespace {

namespace io = linebal::report_io;
namespace model = linebal::model;
namespace planning = linebal::planning;
namespace milp = linebal::milp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // validation / parse errors
constexpr int kExitNotOptimal = 2;  // node limit or uncertifiable solve

struct CommonOptions {
  std::string process_sheet;
  std::string resources;
  std::string scenario;
  std::string format = "text";
  std::string out;
};

void add_scenario_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--process-sheet", opts.process_sheet, "Process sheet CSV")->required();
  cmd->add_option("--resources", opts.resources, "Resources CSV")->required();
  cmd->add_option("--scenario", opts.scenario, "Scenario config JSON")->required();
}

void add_output_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format: text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  cmd->add_option("--out", opts.out, "Write the report to this file instead of stdout");
}

model::Scenario load(const CommonOptions& opts) {
  return io::load_scenario({opts.process_sheet, opts.resources, opts.scenario});
}

// Reports go to stdout unless --out was given; file writes are atomic.
void deliver(const std::string& rendered, const CommonOptions& opts) {
  if (opts.out.empty()) {
    std::cout << rendered;
  } else {
    io::write_file_atomic(opts.out, rendered);
  }
}

model::LayoutSpec layout_or_throw(const model::Scenario& scenario) {
  if (!scenario.layout)
    throw linebal::ValidationError(
        "this command needs the scenario's \"stations\" allocation; add it to the scenario JSON");
  return *scenario.layout;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Garment line balancing: capacity planning, throughput analysis and\n"
               "cost-optimal online/offline splits via an exact MILP solver."};
  app.require_subcommand(1);

  CommonOptions opts;
  std::vector<std::string> set_exprs;
  std::string problem_path;
  std::int64_t max_nodes = milp::SolveOptions{}.max_nodes;

  CLI::App* capacity = app.add_subcommand("capacity-plan", "Machine requirements per task");
  add_scenario_options(capacity, opts);
  add_output_options(capacity, opts);

  CLI::App* throughput = app.add_subcommand("throughput", "Daily output per task and line rate");
  add_scenario_options(throughput, opts);
  add_output_options(throughput, opts);

  CLI::App* optimize = app.add_subcommand("optimize", "Cost-optimal online/offline plan");
  add_scenario_options(optimize, opts);
  add_output_options(optimize, opts);
  optimize->add_option("--max-nodes", max_nodes, "Branch-and-bound node limit");

  CLI::App* baseline = app.add_subcommand("baseline", "All-offline cost sheet");
  add_scenario_options(baseline, opts);
  add_output_options(baseline, opts);

  CLI::App* compare = app.add_subcommand("compare", "All-offline baseline vs optimized cost");
  add_scenario_options(compare, opts);
  add_output_options(compare, opts);
  compare->add_option("--max-nodes", max_nodes, "Branch-and-bound node limit");

  CLI::App* whatif = app.add_subcommand("whatif", "Re-solve with overrides applied");
  add_scenario_options(whatif, opts);
  add_output_options(whatif, opts);
  whatif->add_option("--set", set_exprs,
                     "Override, e.g. task.T37.demand=800 or resource.Single Sewing "
                     "MC.machines=12 (repeatable)");
  whatif->add_option("--max-nodes", max_nodes, "Branch-and-bound node limit");

  CLI::App* solve = app.add_subcommand("solve", "Solve a generic MILP problem file");
  solve->add_option("--problem", problem_path, "Problem JSON")->required();
  add_output_options(solve, opts);
  solve->add_option("--max-nodes", max_nodes, "Branch-and-bound node limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const io::Format format = io::format_from_string(opts.format);
    milp::SolveOptions solve_options;
    solve_options.max_nodes = max_nodes;

    if (capacity->parsed()) {
      deliver(io::render_capacity_plan(planning::capacity_requirement_plan(load(opts)), format),
              opts);
    } else if (throughput->parsed()) {
      const model::Scenario scenario = load(opts);
      deliver(io::render_throughput(
                  planning::throughput_analysis(scenario, layout_or_throw(scenario)), format),
              opts);
    } else if (optimize->parsed()) {
      deliver(io::render_balancing_plan(model::solve_scenario(load(opts), solve_options), format),
              opts);
    } else if (baseline->parsed()) {
      const model::Scenario scenario = load(opts);
      deliver(io::render_cost_sheet(
                  planning::cost_sheet(planning::all_offline_baseline(scenario), scenario), format),
              opts);
    } else if (compare->parsed()) {
      const model::Scenario scenario = load(opts);
      const model::BalancingPlan offline = planning::all_offline_baseline(scenario);
      const model::BalancingPlan optimal = model::solve_scenario(scenario, solve_options);
      planning::ComparisonReport report;
      report.baseline_cost = offline.total_cost;
      report.optimized_cost = optimal.total_cost;
      report.saving_percent = offline.total_cost > 0.0
                                  ? planning::cost_saving(offline.total_cost, optimal.total_cost)
                                  : 0.0;
      deliver(io::render_comparison(report, format), opts);
    } else if (whatif->parsed()) {
      planning::OverrideSet overrides;
      overrides.reserve(set_exprs.size());
      for (const std::string& expr : set_exprs) overrides.push_back(planning::parse_override(expr));
      deliver(io::render_comparison(planning::whatif(load(opts), overrides, solve_options), format),
              opts);
    } else if (solve->parsed()) {
      const milp::MilpProblem problem = io::load_milp_problem(problem_path);
      const milp::MilpSolution solution = milp::solve_milp(problem, solve_options);
      deliver(io::render_milp_solution(solution, format), opts);
      if (solution.status == milp::MilpStatus::NodeLimit) {
        std::cerr << "linebal: node limit of " << max_nodes
                  << " reached before the optimum was certified\n";
        return kExitNotOptimal;
      }
    }
    return kExitOk;
  } catch (const linebal::SolverError& e) {
    std::cerr << "linebal: " << e.what() << "\n";
    return kExitNotOptimal;
  } catch (const std::exception& e) {
    std::cerr << "linebal: " << e.what() << "\n";
    return kExitUsage;
  }
}
