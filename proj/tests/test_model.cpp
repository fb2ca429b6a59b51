// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "linebal/errors.hpp"
#include "linebal/model.hpp"
#include "test_util.hpp"

using namespace linebal;
using testutil::load_style_a;

namespace {

// One task, one resource, everything explicit.
model::Scenario tiny_scenario(std::int64_t demand, double cycle, std::int64_t machines,
                              double capacity, double online_rate, double offline_rate) {
  model::Scenario s;
  s.tasks.push_back({"T1", "only task", demand, online_rate, offline_rate});
  s.resources.push_back({"M1", machines, capacity});
  if (cycle > 0.0) s.consumption.set("T1", "M1", cycle);
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("style A builds 38 variables and 26 constraints") {
  const model::Scenario s = load_style_a();
  REQUIRE(s.tasks.size() == 19);
  REQUIRE(s.resources.size() == 7);

  const milp::MilpProblem p = model::build_milp(s);
  CHECK(p.num_vars() == 38);
  CHECK(p.constraints.size() == 26);  // 19 demand rows + 7 capacity rows
  std::size_t ge = 0, le = 0;
  for (const auto& c : p.constraints) {
    if (c.relation == milp::Relation::GE) ++ge;
    if (c.relation == milp::Relation::LE) ++le;
  }
  CHECK(ge == 19);
  CHECK(le == 7);
  for (std::size_t i = 0; i < p.num_vars(); ++i) CHECK(p.integral[i] == 1);
}

TEST_CASE("online upper bounds fit the tightest resource budget") {
  const model::Scenario s = load_style_a();
  const milp::MilpProblem p = model::build_milp(s);
  const auto index_of = [&](const char* id) {
    for (std::size_t i = 0; i < s.tasks.size(); ++i)
      if (s.tasks[i].id == id) return i;
    FAIL("unknown task");
    return std::size_t{0};
  };
  // Single-machine pools cap online output below demand.
  CHECK(p.upper_bounds[index_of("T20")] == 720.0);   // 28800/40
  CHECK(p.upper_bounds[index_of("T40")] == 785.0);   // 86400/110
  CHECK(p.upper_bounds[index_of("T46")] == 822.0);   // 28800/35
  CHECK(p.upper_bounds[index_of("T44")] == 720.0);   // 57600/80
  CHECK(p.upper_bounds[index_of("T37")] == 900.0);   // pool is large, demand binds
  // Offline bound is the demand.
  CHECK(p.upper_bounds[s.tasks.size() + index_of("T37")] == 900.0);
}

TEST_CASE("zero demand solves to an all-zero plan") {
  const model::Scenario s = tiny_scenario(0, 10.0, 1, 28800.0, 0.013, 0.035);
  const model::BalancingPlan plan = model::solve_scenario(s);
  CHECK(plan.rows[0].online_qty == 0);
  CHECK(plan.rows[0].offline_qty == 0);
  CHECK(plan.total_cost == doctest::Approx(0.0));
}

TEST_CASE("empty consumption leaves capacity out and everything online") {
  model::Scenario s;
  s.tasks.push_back({"A", "", 40, 0.01, 0.05});
  s.tasks.push_back({"B", "", 60, 0.01, 0.05});
  s.resources.push_back({"M1", 2, 28800.0});

  const milp::MilpProblem p = model::build_milp(s);
  CHECK(p.constraints.size() == 2);  // demand rows only, no capacity row

  const model::BalancingPlan plan = model::solve_scenario(s);
  CHECK(plan.rows[0].online_qty == 40);
  CHECK(plan.rows[1].online_qty == 60);
  CHECK(plan.rows[0].offline_qty == 0);
  CHECK(plan.rows[1].offline_qty == 0);
}

TEST_CASE("dangling consumption reference is rejected") {
  model::Scenario s;
  s.tasks.push_back({"T1", "", 10, 0.0, 0.0});
  s.consumption.set("T1", "Laser MC", 30.0);
  CHECK_THROWS_AS(model::build_milp(s), ValidationError);
}

TEST_CASE("decode_plan checks status, dimension and objective") {
  const model::Scenario s = tiny_scenario(10, 10.0, 1, 28800.0, 0.013, 0.035);

  milp::MilpSolution bad_status;
  bad_status.status = milp::MilpStatus::NodeLimit;
  CHECK_THROWS_AS(model::decode_plan(s, bad_status), ValidationError);

  milp::MilpSolution bad_dim;
  bad_dim.status = milp::MilpStatus::Optimal;
  bad_dim.values = {1.0};
  CHECK_THROWS_AS(model::decode_plan(s, bad_dim), ValidationError);

  milp::MilpSolution wrong_obj;
  wrong_obj.status = milp::MilpStatus::Optimal;
  wrong_obj.values = {10.0, 0.0};
  wrong_obj.objective = 99.0;  // true cost is 0.13
  CHECK_THROWS_AS(model::decode_plan(s, wrong_obj), ValidationError);
}

TEST_CASE("knapsack oracle: hand-checked single task") {
  // Budget admits exactly 50 online pieces: 500 s / 10 s per piece.
  const model::Scenario s = tiny_scenario(100, 10.0, 1, 500.0, 1.0, 2.0);
  const model::BalancingPlan plan = model::knapsack_oracle(s);
  CHECK(plan.rows[0].online_qty == 50);
  CHECK(plan.rows[0].offline_qty == 50);
  CHECK(plan.total_cost == doctest::Approx(150.0));
}

TEST_CASE("knapsack oracle: zero budget sends everything offline") {
  model::Scenario s;
  s.tasks.push_back({"A", "", 30, 0.01, 0.05});
  s.tasks.push_back({"B", "", 20, 0.01, 0.07});
  s.resources.push_back({"M1", 0, 28800.0});
  s.consumption.set("A", "M1", 10.0);
  s.consumption.set("B", "M1", 20.0);
  const model::BalancingPlan plan = model::knapsack_oracle(s);
  CHECK(plan.rows[0].online_qty == 0);
  CHECK(plan.rows[1].online_qty == 0);
  CHECK(plan.total_cost == doctest::Approx(30 * 0.05 + 20 * 0.07));
}

TEST_CASE("knapsack oracle: preconditions") {
  model::Scenario multi;
  multi.tasks.push_back({"T1", "", 10, 0.01, 0.02});
  multi.resources.push_back({"M1", 1, 28800.0});
  multi.resources.push_back({"M2", 1, 28800.0});
  multi.consumption.set("T1", "M1", 10.0);
  multi.consumption.set("T1", "M2", 10.0);
  CHECK_THROWS_AS(model::knapsack_oracle(multi), ValidationError);

  const model::Scenario fractional = tiny_scenario(10, 10.5, 1, 28800.0, 0.01, 0.02);
  CHECK_THROWS_AS(model::knapsack_oracle(fractional), ValidationError);

  const model::Scenario huge = tiny_scenario(10, 10.0, 1, 2e7, 0.01, 0.02);
  CHECK_THROWS_AS(model::knapsack_oracle(huge), ValidationError);
}

TEST_CASE("style A: solver and oracle agree on the published optimum") {
  const model::Scenario s = load_style_a();
  const model::BalancingPlan solved = model::solve_scenario(s);
  const model::BalancingPlan oracle = model::knapsack_oracle(s);
  CHECK(solved.total_cost == doctest::Approx(oracle.total_cost).epsilon(1e-9));
  CHECK(solved.total_cost == doctest::Approx(testutil::expected_optimal_cost()).epsilon(1e-9));
  CHECK(solved.total_cost == doctest::Approx(241.57).epsilon(1e-4));

  // The bottleneck split lands on T37 of the single-sewing pool.
  const auto t37 = std::find_if(solved.rows.begin(), solved.rows.end(),
                                [](const auto& r) { return r.task_id == "T37"; });
  REQUIRE(t37 != solved.rows.end());
  CHECK(t37->online_qty == 577);
  CHECK(t37->offline_qty == 323);
}

TEST_CASE("style A: LP relaxation lower-bounds the integer optimum") {
  const milp::MilpProblem p = model::build_milp(load_style_a());
  const milp::LpSolution relaxed = milp::solve_lp(p);
  REQUIRE(relaxed.status == milp::LpStatus::Optimal);
  CHECK(relaxed.objective <= 241.58);
  CHECK(relaxed.objective >= 241.0);  // sanity: the bound is tight, not vacuous
}

TEST_CASE("tight demand: plans never overproduce when both rates are positive") {
  std::mt19937 rng(20240811);
  for (int round = 0; round < 20; ++round) {
    model::Scenario s = testutil::random_scenario(rng);
    for (auto& t : s.tasks) {
      t.online_cost_rate += 0.001;  // keep both rates strictly positive
      t.offline_cost_rate += 0.001;
    }
    const model::BalancingPlan plan = model::solve_scenario(s);
    for (std::size_t i = 0; i < s.tasks.size(); ++i) {
      CHECK(plan.rows[i].online_qty + plan.rows[i].offline_qty == s.tasks[i].demand);
    }
  }
}

TEST_SUITE_END();
