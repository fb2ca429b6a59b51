// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "linebal/errors.hpp"
#include "linebal/planning.hpp"
#include "linebal/report_io.hpp"
#include "test_util.hpp"

using namespace linebal;
namespace fs = std::filesystem;
namespace io = report_io;
using testutil::load_style_a;

namespace {

// Fresh directory for scratch files, removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "linebal_test_XXXXXX").string();
    REQUIRE(mkdtemp(tmpl.data()) != nullptr);
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path file(const char* name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& contents) {
  std::ofstream out(p, std::ios::binary);
  out << contents;
}

io::ScenarioFiles files_in(const TempDir& dir) {
  return {dir.file("process.csv"), dir.file("resources.csv"), dir.file("scenario.json")};
}

constexpr const char* kResourcesCsv =
    "resource,available_machines,daily_capacity_sec\nM1,1,28800\n";
constexpr const char* kScenarioJson =
    "{\"demand\": {\"default\": 10}, \"online_rate\": 0.013, \"offline_rate\": 0.035}\n";

}  // namespace

TEST_SUITE_BEGIN("report_io");

TEST_CASE("style A fixture loads with the published shape") {
  const model::Scenario s = load_style_a();
  REQUIRE(s.tasks.size() == 19);
  REQUIRE(s.resources.size() == 7);
  CHECK(s.tasks.front().id == "T19");
  CHECK(s.tasks.front().demand == 900);
  CHECK(s.tasks.front().online_cost_rate == 0.013);
  CHECK(s.tasks.front().offline_cost_rate == 0.035);
  CHECK(s.consumption.seconds("T37", "Single Sewing MC") == 120.0);
  REQUIRE(s.layout.has_value());
  CHECK(s.layout->workday_seconds == 28800.0);
  CHECK(s.layout->stations.at("T37") == 3);
  const model::ResourceSpec* pool = s.find_resource("Single Sewing MC");
  REQUIRE(pool != nullptr);
  CHECK(pool->available_machines == 11);
}

TEST_CASE("loader errors carry file, line and field") {
  TempDir dir;
  const io::ScenarioFiles files = files_in(dir);
  write_text(files.resources, kResourcesCsv);
  write_text(files.scenario_config, kScenarioJson);

  SUBCASE("empty process sheet") {
    write_text(files.process_sheet, "task,description,resource,cycle_time_sec\n");
    CHECK_THROWS_WITH_AS(io::load_scenario(files),
                         doctest::Contains("no tasks"), ParseError);
  }
  SUBCASE("missing column") {
    write_text(files.process_sheet, "task,description,resource\nT1,x,M1\n");
    CHECK_THROWS_WITH_AS(io::load_scenario(files),
                         doctest::Contains("missing column \"cycle_time_sec\""), ParseError);
  }
  SUBCASE("dangling resource reference") {
    write_text(files.process_sheet,
               "task,description,resource,cycle_time_sec\nT1,x,Laser MC,30\n");
    try {
      io::load_scenario(files);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string what = e.what();
      CHECK(what.find("process.csv:2") != std::string::npos);
      CHECK(what.find("Laser MC") != std::string::npos);
    }
  }
  SUBCASE("duplicate task id") {
    write_text(files.process_sheet,
               "task,description,resource,cycle_time_sec\nT1,x,M1,30\nT1,y,M1,40\n");
    CHECK_THROWS_WITH_AS(io::load_scenario(files), doctest::Contains("duplicate id"), ParseError);
  }
  SUBCASE("negative value") {
    write_text(files.process_sheet,
               "task,description,resource,cycle_time_sec\nT1,x,M1,-30\n");
    CHECK_THROWS_WITH_AS(io::load_scenario(files), doctest::Contains("negative"), ParseError);
  }
  SUBCASE("demand for an unknown task") {
    write_text(files.process_sheet, "task,description,resource,cycle_time_sec\nT1,x,M1,30\n");
    write_text(files.scenario_config,
               "{\"demand\": {\"default\": 10, \"T9\": 5}, \"online_rate\": 1, \"offline_rate\": 2}");
    CHECK_THROWS_WITH_AS(io::load_scenario(files), doctest::Contains("unknown task \"T9\""),
                         ParseError);
  }
  SUBCASE("missing rates") {
    write_text(files.process_sheet, "task,description,resource,cycle_time_sec\nT1,x,M1,30\n");
    write_text(files.scenario_config, "{\"demand\": {\"default\": 10}}");
    CHECK_THROWS_WITH_AS(io::load_scenario(files), doctest::Contains("online_rate"), ParseError);
  }
  SUBCASE("stations must cover every task") {
    write_text(files.process_sheet,
               "task,description,resource,cycle_time_sec\nT1,x,M1,30\nT2,y,M1,20\n");
    write_text(files.scenario_config,
               "{\"demand\": {\"default\": 10}, \"online_rate\": 1, \"offline_rate\": 2, "
               "\"stations\": {\"T1\": 1}}");
    CHECK_THROWS_WITH_AS(io::load_scenario(files), doctest::Contains("stations is missing"),
                         ParseError);
  }
}

TEST_CASE("scenario round-trips field-for-field") {
  TempDir dir;
  const io::ScenarioFiles copy = files_in(dir);

  const model::Scenario original = load_style_a();
  io::write_scenario_files(original, copy);
  const model::Scenario reloaded = io::load_scenario(copy);
  CHECK(reloaded == original);

  // Commas and quotes in descriptions survive the CSV quoting rules.
  model::Scenario tricky = original;
  tricky.tasks[0].description = "mark, align \"front\" pocket";
  tricky.tasks[1].online_cost_rate = 0.0145;  // forces a rates_per_task entry
  io::write_scenario_files(tricky, copy);
  CHECK(io::load_scenario(copy) == tricky);
}

TEST_CASE("emission is deterministic and JSON/CSV are well-formed") {
  const model::Scenario s = load_style_a();
  const model::BalancingPlan plan = model::solve_scenario(s);

  const std::string a = io::render_balancing_plan(plan, io::Format::Json);
  const std::string b = io::render_balancing_plan(plan, io::Format::Json);
  CHECK(a == b);

  const auto doc = nlohmann::json::parse(a);  // strict parse
  CHECK(doc.at("report") == "balancing_plan");
  CHECK(doc.at("rendered") == "241.6");
  CHECK(doc.at("total_cost").get<double>() == doctest::Approx(241.572).epsilon(1e-9));

  for (const auto format : {io::Format::Text, io::Format::Csv, io::Format::Json}) {
    CHECK(io::render_balancing_plan(plan, format) == io::render_balancing_plan(plan, format));
  }

  // A comma-bearing field is quoted in CSV output.
  planning::CostSheet sheet;
  sheet.rows.push_back({"T1, with comma", 1, 1.0, 0, 0.0, 1.0});
  sheet.total = 1.0;
  const std::string csv = io::render_cost_sheet(sheet, io::Format::Csv);
  CHECK(csv.find("\"T1, with comma\"") != std::string::npos);
}

TEST_CASE("every report type emits strict JSON") {
  const model::Scenario s = load_style_a();
  const model::BalancingPlan plan = model::solve_scenario(s);
  const auto check = [](const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc.is_object());
  };
  check(io::render_capacity_plan(planning::capacity_requirement_plan(s), io::Format::Json));
  check(io::render_throughput(planning::throughput_analysis(s, *s.layout), io::Format::Json));
  check(io::render_balancing_plan(plan, io::Format::Json));
  check(io::render_cost_sheet(planning::cost_sheet(plan, s), io::Format::Json));
  planning::ComparisonReport cmp{598.5, 241.572, 59.637};
  check(io::render_comparison(cmp, io::Format::Json));
  check(io::render_milp_solution(milp::solve_milp(model::build_milp(s)), io::Format::Json));

  milp::MilpSolution infeasible;  // objective NaN must serialize as null
  const std::string text = io::render_milp_solution(infeasible, io::Format::Json);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("objective").is_null());
}

TEST_CASE("empty reports render headers only") {
  const std::string csv = io::render_capacity_plan({}, io::Format::Csv);
  CHECK(csv ==
        "task,resource,cycle_time_sec,loading_sec,requested_machines,available_machines,shortage\n");
  const std::string text = io::render_capacity_plan({}, io::Format::Text);
  CHECK(text.find("Task") != std::string::npos);
}

TEST_CASE("fixed-point rendering rounds half away from zero") {
  CHECK(io::format_fixed(-0.25, 1) == "-0.3");
  CHECK(io::format_fixed(0.0625, 1) == "0.1");
  CHECK(io::format_fixed(0.9375, 2) == "0.94");
  CHECK(io::format_fixed(3.4375, 2) == "3.44");
  CHECK(io::format_fixed(241.572, 1) == "241.6");
  CHECK(io::format_fixed(598.5, 1) == "598.5");
  CHECK(io::format_fixed(-0.09375, 1) == "-0.1");
  CHECK(io::format_fixed(15.66, 1) == "15.7");
  CHECK(io::format_fixed(7.0, 0) == "7");
  CHECK(io::format_fixed(-0.04, 1) == "0.0");
}

TEST_CASE("compact rendering round-trips doubles") {
  CHECK(io::format_compact(0.013) == "0.013");
  CHECK(io::format_compact(28800.0) == "28800");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(io::format_compact(v)) == v);
}

TEST_CASE("milp problem file loads and validates") {
  const milp::MilpProblem p = io::load_milp_problem(testutil::data_dir() + "/sample_milp.json");
  CHECK(p.num_vars() == 2);
  CHECK(p.constraints.size() == 2);
  CHECK(p.integral[0] == 1);

  const auto exact = milp::brute_force_milp(p);
  const auto solved = milp::solve_milp(p);
  REQUIRE(exact.status == milp::MilpStatus::Optimal);
  REQUIRE(solved.status == milp::MilpStatus::Optimal);
  CHECK(solved.objective == doctest::Approx(-20.0));
  CHECK(solved.objective == doctest::Approx(exact.objective));

  TempDir dir;
  write_text(dir.file("bad.json"), "{\"costs\": [1], \"rel\": true}");
  CHECK_THROWS_AS(io::load_milp_problem(dir.file("bad.json")), ParseError);
  write_text(dir.file("rel.json"),
             "{\"costs\": [1], \"constraints\": [{\"coeffs\": [1], \"rel\": \"lte\", \"rhs\": 1}]}");
  CHECK_THROWS_WITH_AS(io::load_milp_problem(dir.file("rel.json")),
                       doctest::Contains("\"rel\" must be"), ParseError);
}

TEST_CASE("atomic writes leave no partial file behind") {
  TempDir dir;
  const fs::path dest = dir.file("report.txt");
  io::write_file_atomic(dest, "hello\n");
  CHECK(fs::exists(dest));
  CHECK(!fs::exists(dir.file("report.txt.tmp")));

  std::ifstream in(dest);
  std::string line;
  std::getline(in, line);
  CHECK(line == "hello");
}

TEST_SUITE_END();
