// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "linebal/milp.hpp"
#include "linebal/model.hpp"
#include "linebal/planning.hpp"

namespace linebal::report_io {

enum class Format { Text, Csv, Json };

// Accepts "text", "csv" or "json".
Format format_from_string(std::string_view name);

struct ScenarioFiles {
  std::filesystem::path process_sheet;    // task,description,resource,cycle_time_sec
  std::filesystem::path resources;        // resource,available_machines,daily_capacity_sec
  std::filesystem::path scenario_config;  // demand, rates, workday, stations (JSON)
};

// Loads and cross-validates the three scenario files. Row order in the
// process sheet fixes the task order. Throws ParseError with file, line and
// field on malformed input.
model::Scenario load_scenario(const ScenarioFiles& files);

// Inverse of load_scenario; a written scenario loads back field-for-field.
// Requires at most one consumed resource per task (the process-sheet format
// has a single resource column).
void write_scenario_files(const model::Scenario& scenario, const ScenarioFiles& files);

// Generic MILP problem file for the `solve` subcommand: JSON object with
// `costs`, `constraints` ({coeffs, rel, rhs}), optional `lower` (default 0),
// `upper` (number or null per entry) and `integral`.
milp::MilpProblem load_milp_problem(const std::filesystem::path& path);

// Renderers produce the complete document, byte-stable for identical input.
// Text and CSV apply the presentation rounding (2 dp requested machines,
// 1 dp shortage/effective cycle/costs); JSON carries full-precision numbers
// plus `*rendered` fields with the rounded strings.
std::string render_capacity_plan(const std::vector<planning::CapacityPlanRow>& rows, Format format);
std::string render_throughput(const planning::ThroughputReport& report, Format format);
std::string render_balancing_plan(const model::BalancingPlan& plan, Format format);
std::string render_cost_sheet(const planning::CostSheet& sheet, Format format);
std::string render_comparison(const planning::ComparisonReport& report, Format format);
std::string render_milp_solution(const milp::MilpSolution& solution, Format format);

void emit_report(const std::vector<planning::CapacityPlanRow>& rows, Format format,
                 std::ostream& out);
void emit_report(const planning::ThroughputReport& report, Format format, std::ostream& out);
void emit_report(const model::BalancingPlan& plan, Format format, std::ostream& out);
void emit_report(const planning::CostSheet& sheet, Format format, std::ostream& out);
void emit_report(const planning::ComparisonReport& report, Format format, std::ostream& out);
void emit_report(const milp::MilpSolution& solution, Format format, std::ostream& out);

// Writes via a temporary file and renames, so a failed run leaves no partial
// output behind.
void write_file_atomic(const std::filesystem::path& destination, std::string_view contents);

// Half-away-from-zero fixed-point rendering ("-0.25" at 1 dp -> "-0.3").
std::string format_fixed(double value, int decimals);

// Shortest decimal form that parses back to the same double.
std::string format_compact(double value);

}  // namespace linebal::report_io
