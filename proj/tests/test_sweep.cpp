#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "usctopo/errors.hpp"
#include "usctopo/observables.hpp"
#include "usctopo/spectra.hpp"
#include "usctopo/sweep.hpp"

using namespace usctopo;

namespace {

SweepPlan two_axis_plan() {
  SweepPlan p;
  p.n_sites = 4;
  p.axes = {{AxisKind::jbar, {0.1, 0.5}}, {AxisKind::epsilon, linspace(-1, 1, 5)}};
  p.outputs = {true, true, true, true, true};
  return p;
}

}  // namespace

TEST_CASE("linspace has exact endpoints") {
  const auto v = linspace(-1.0, 1.0, 21);
  REQUIRE(v.size() == 21);
  CHECK(v.front() == -1.0);
  CHECK(v.back() == 1.0);
  CHECK(v[10] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(linspace(0.3, 0.7, 1) == std::vector<double>{0.3});
}

TEST_CASE("grid enumeration puts the first axis outermost") {
  const auto grid = enumerate_grid(two_axis_plan());
  REQUIRE(grid.size() == 10);
  CHECK(grid[0].jbar == 0.1);
  CHECK(grid[0].epsilon == -1.0);
  CHECK(grid[1].epsilon == -0.5);
  CHECK(grid[5].jbar == 0.5);
  CHECK(grid[5].epsilon == -1.0);
  CHECK(two_axis_plan().grid_size() == 10);
}

TEST_CASE("sweep records match direct computation") {
  const auto plan = two_axis_plan();
  const auto r = run_sweep(plan, SweepOptions{1});
  CHECK(r.failures.empty());
  REQUIRE(r.states.size() == 10 * 16);
  REQUIRE(r.points.size() == 10);
  REQUIRE(r.fidelity.size() == 10);
  const auto basis = build_basis(4);
  const auto spec = ChainSpec::from_dimerization(4, 1.0, -0.5, 0.5, false);
  const auto direct = diagnose(diagonalize(build_chain(spec, basis)), basis);
  for (int k = 0; k < 16; ++k) {
    const auto& rec = r.states[(5 + 1) * 16 + k];
    CHECK(rec.point.epsilon == -0.5);
    CHECK(rec.point.jbar == 0.5);
    CHECK(rec.state.eigenvalue == direct[k].eigenvalue);
    CHECK(rec.state.participation_ratio == direct[k].participation_ratio);
  }
}

TEST_CASE("serial and threaded sweeps agree exactly") {
  const auto plan = two_axis_plan();
  const auto serial = run_sweep(plan, SweepOptions{1});
  const auto threaded = run_sweep(plan, SweepOptions{4});
  CHECK(serial.states == threaded.states);
  REQUIRE(serial.points.size() == threaded.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].occupancy.mean_excitations == threaded.points[i].occupancy.mean_excitations);
    CHECK(serial.fidelity[i].map.cells == threaded.fidelity[i].map.cells);
  }
}

TEST_CASE("per-point failures are captured") {
  SweepPlan p;
  p.boundary = Boundary::periodic;
  p.axes = {{AxisKind::n_sites, {3, 4}}};
  const auto r = run_sweep(p);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].point.n_sites == 3);
  CHECK(r.states.size() == 16);
}

TEST_CASE("plan validation") {
  SweepPlan p;
  p.axes = {{AxisKind::epsilon, {0.0}}, {AxisKind::epsilon, {0.1}}};
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.axes = {{AxisKind::epsilon, {1.5}}};
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.axes = {{AxisKind::n_sites, {13}}};
  CHECK_THROWS_AS(p.validate(), SizeError);
  p.site_cap = 14;
  CHECK_NOTHROW(p.validate());
  p.site_cap = 15;
  CHECK_THROWS_AS(p.validate(), SizeError);
  p = SweepPlan{};
  p.axes = {{AxisKind::epsilon, {}}};
  CHECK(run_sweep(p).states.empty());
}

TEST_CASE("plan JSON round trip") {
  const auto doc = nlohmann::json::parse(R"({
    "n_sites": 6, "omega0": 1.0, "rwa": true, "boundary": "periodic",
    "axes": [{"name": "jbar", "values": [0.1, 0.3]},
             {"name": "eps", "start": -1, "stop": 1, "points": 3}],
    "outputs": ["eigenvalues", "pr", "occupancy"]})");
  const auto plan = plan_from_json(doc);
  CHECK(plan.n_sites == 6);
  CHECK(plan.rwa);
  CHECK(plan.boundary == Boundary::periodic);
  REQUIRE(plan.axes.size() == 2);
  CHECK(plan.axes[1].values == std::vector<double>{-1, 0, 1});
  CHECK(plan.outputs.participation);
  CHECK_FALSE(plan.outputs.fidelity);
  const auto again = plan_from_json(plan_to_json(plan));
  CHECK(plan_to_json(again) == plan_to_json(plan));
  CHECK_THROWS_AS(plan_from_json(nlohmann::json::parse(R"({"outputs": ["bogus"]})")), DomainError);
  CHECK_THROWS_AS(plan_from_json(nlohmann::json::parse(R"({"axes": [{"name": "x", "values": [1]}]})")),
                  DomainError);
}
