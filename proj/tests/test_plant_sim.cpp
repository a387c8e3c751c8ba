#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "maestro/plant_sim.hpp"

using namespace maestro;
using test_helpers::make_service;
using test_helpers::table1_catalog;

namespace {

double volume(const PlantState& s, const PlantParams& p) {
  return p.a1 * s.h1 + p.a2 * s.h2 + p.a3 * s.h3;
}

SimScenario base_scenario(double duration) {
  SimScenario scn;
  scn.duration = duration;
  scn.ts = 0.1;
  scn.seed = 42;
  scn.reference = {{0.0, 0.3}};
  return scn;
}

}  // namespace

TEST_CASE("empty plant with no inflow stays empty") {
  PlantParams p;
  PlantState s{0.0, 0.0, 0.0};
  PlantState next = plant_step(s, 0.0, p, 0.1);
  CHECK(next.h1 == 0.0);
  CHECK(next.h2 == 0.0);
  CHECK(next.h3 == 0.0);
}

TEST_CASE("closed outlet conserves mass exactly per Euler step") {
  PlantParams p;
  p.c3 = 0.0;  // outlet shut
  PlantState s{0.2, 0.15, 0.1};
  const double u = 5e-5;
  for (int k = 0; k < 200; ++k) {
    const double before = volume(s, p);
    s = plant_step(s, u, p, 0.1);
    const double gain = volume(s, p) - before;
    CHECK(std::fabs(gain - u * 0.1) <= 1e-12 * std::max(1.0, before));
  }
}

TEST_CASE("equal levels drain only through the outlet") {
  PlantParams p;
  PlantState s{0.3, 0.3, 0.3};
  PlantState next = plant_step(s, 0.0, p, 0.1);
  CHECK(next.h1 == 0.3);
  CHECK(next.h2 == 0.3);
  CHECK(next.h3 < 0.3);
}

TEST_CASE("levels never go negative and clip at the tank height") {
  PlantParams p;
  std::mt19937_64 rng(9);
  auto uniform = [&] { return (rng() >> 11) * 0x1p-53; };
  PlantState s{0.0, 0.5, 0.01};
  for (int k = 0; k < 5000; ++k) {
    const double u = p.u_max * uniform();
    s = plant_step(s, u, p, 0.1);
    CHECK(s.h1 >= 0.0);
    CHECK(s.h2 >= 0.0);
    CHECK(s.h3 >= 0.0);
    CHECK(s.h1 <= p.h_max);
    CHECK(s.h2 <= p.h_max);
    CHECK(s.h3 <= p.h_max);
  }
}

TEST_CASE("with no inflow total volume never increases") {
  PlantParams p;
  PlantState s{0.5, 0.2, 0.4};
  double previous = volume(s, p);
  for (int k = 0; k < 2000; ++k) {
    s = plant_step(s, 0.0, p, 0.1);
    const double v = volume(s, p);
    CHECK(v <= previous + 1e-15);
    previous = v;
  }
}

TEST_CASE("the closed-form equilibrium is stationary under plant_step") {
  PlantParams p;
  Equilibrium eq = equilibrium_for(p, 0.3);
  PlantState next = eq.levels;
  for (int k = 0; k < 100; ++k) next = plant_step(next, eq.u, p, 0.1);
  CHECK(next.h1 == doctest::Approx(eq.levels.h1).epsilon(1e-9));
  CHECK(next.h2 == doctest::Approx(eq.levels.h2).epsilon(1e-9));
  CHECK(next.h3 == doctest::Approx(eq.levels.h3).epsilon(1e-9));
}

TEST_CASE("plant_step rejects bad inputs") {
  PlantParams p;
  CHECK_THROWS_AS(plant_step({}, -1.0, p, 0.1), ContractError);
  CHECK_THROWS_AS(plant_step({}, 0.0, p, 0.0), ContractError);
}

TEST_CASE("gaussian noise stream is reproducible per seed") {
  GaussianNoise a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double va = a.sample(1.0);
    all_equal = all_equal && va == b.sample(1.0);
    any_diff = any_diff || va != c.sample(1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(GaussianNoise(5).sample(0.0) == 0.0);
}

TEST_CASE("a service-addition event mid-run creates exactly two epochs") {
  SimScenario scn = base_scenario(4.0);
  scn.events.push_back(
      {2.0, ServiceAdded{make_service("mpc", ServiceKind::controller, 1, 1, true)}});
  SimResult result = run_scenario(scn, table1_catalog(false), {1.0, 100.0});
  REQUIRE(result.history.size() == 2);
  CHECK(result.history[0].epoch == 1);
  CHECK(result.history[1].epoch == 2);
  CHECK(result.history[1].t == 2.0);
  CHECK(result.trace.size() == 40);
  // epochs in the trace are non-decreasing and switch at the event
  CHECK(result.trace.front().epoch == 1);
  CHECK(result.trace.back().epoch == 2);
  for (std::size_t i = 1; i < result.trace.size(); ++i)
    CHECK(result.trace[i].epoch >= result.trace[i - 1].epoch);
}

TEST_CASE("no events means exactly one epoch") {
  SimResult result = run_scenario(base_scenario(2.0), table1_catalog(false), {1.0, 100.0});
  CHECK(result.history.size() == 1);
  CHECK(result.trace.size() == 20);
}

TEST_CASE("zero duration gives an empty trace") {
  SimResult result = run_scenario(base_scenario(0.0), table1_catalog(false), {1.0, 100.0});
  CHECK(result.trace.empty());
  CHECK(result.history.size() == 1);
  CHECK(trace_to_csv(result.trace) == "t,h1,h2,h3,y,xhat1,xhat2,xhat3,u,epoch,step_us\n");
}

TEST_CASE("identical scenario and seed reproduce the trace byte for byte") {
  SimScenario scn = base_scenario(5.0);
  scn.events.push_back(
      {2.5, ServiceAdded{make_service("mpc", ServiceKind::controller, 1, 1, true)}});
  SimResult a = run_scenario(scn, table1_catalog(false), {1.0, 100.0});
  SimResult b = run_scenario(scn, table1_catalog(false), {1.0, 100.0});
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
  CHECK(history_to_text(a.history) == history_to_text(b.history));
}

TEST_CASE("estimator hand-off projects the previous estimate onto the new model") {
  // Start on converter+PID (computation-heavy objective), then switch the
  // objective so Kalman+medium / MPC+medium take over.
  SimScenario scn = base_scenario(4.0);
  scn.events.push_back({2.0, WeightsChanged{{1.0, 100.0}}});
  SimResult result = run_scenario(scn, table1_catalog(true), {1000.0, 20.0});
  REQUIRE(result.history.size() == 2);
  // converter era: only the h3 estimate is populated
  CHECK_FALSE(result.trace.front().x_hat[0].has_value());
  CHECK_FALSE(result.trace.front().x_hat[1].has_value());
  CHECK(result.trace.front().x_hat[2].has_value());
  // Kalman+medium era: h2 joins, h1 still absent
  CHECK_FALSE(result.trace.back().x_hat[0].has_value());
  CHECK(result.trace.back().x_hat[1].has_value());
  CHECK(result.trace.back().x_hat[2].has_value());
}

TEST_CASE("orchestration failures mid-run keep the loop alive and flag the record") {
  SimScenario scn = base_scenario(4.0);
  scn.events.push_back({1.0, ServiceRemoved{"pid"}});  // no controller left
  SimResult result = run_scenario(scn, table1_catalog(false), {1.0, 100.0});
  REQUIRE(result.history.size() == 2);
  CHECK(result.history[1].stale);
  CHECK(!result.history[1].note.empty());
  CHECK(result.trace.size() == 40);  // the run completed on the stale loop
  for (const auto& rec : result.trace) CHECK(rec.epoch == 1);
}

TEST_CASE("rejected events are recorded without disturbing the run") {
  SimScenario scn = base_scenario(2.0);
  scn.events.push_back({1.0, ServiceRemoved{"ghost"}});
  SimResult result = run_scenario(scn, table1_catalog(false), {1.0, 100.0});
  REQUIRE(result.history.size() == 2);
  CHECK(!result.history[1].note.empty());
  CHECK(result.trace.size() == 20);
}

TEST_CASE("scenario validation rejects inconsistent scripts") {
  SimScenario scn = base_scenario(10.0);
  SUBCASE("event beyond duration") {
    scn.events.push_back({11.0, WeightsChanged{{1.0, 1.0}}});
    CHECK_THROWS_AS(scn.validate(), ContractError);
  }
  SUBCASE("events out of order") {
    scn.events.push_back({5.0, WeightsChanged{{1.0, 1.0}}});
    scn.events.push_back({4.0, WeightsChanged{{2.0, 1.0}}});
    CHECK_THROWS_AS(scn.validate(), ContractError);
  }
  SUBCASE("reference must start at zero") {
    scn.reference = {{1.0, 0.3}};
    CHECK_THROWS_AS(scn.validate(), ContractError);
  }
}
