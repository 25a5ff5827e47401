#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"

#include "pipedg/scheme.hpp"

#include "oracle_helpers.hpp"

using namespace pipedg;

namespace {

std::shared_ptr<const NetworkProblem> shared_fixture(const char* name) {
  return std::make_shared<const NetworkProblem>(load_fixture(name));
}

// b-weighted average of the upwind traces entering a vertex, divided by the
// total outgoing flow; the value every transport solve must place on the
// vertex dof.
double upwind_mixture(const CoefficientVector& u, int v) {
  const NetworkTopology& topo = u.space->topology();
  double influx = 0.0;
  for (int e : topo.edges_in[v])
    influx += topo.edges[e].velocity *
              evaluate(u, e, topo.edges[e].length, Side::left);
  double out = 0.0;
  for (int e : topo.edges_out[v]) out += topo.edges[e].velocity;
  return influx / out;
}

} // namespace

TEST_SUITE("scheme") {

TEST_CASE("strategy and branch names") {
  CHECK(to_string(MeshStrategy::uniform) == "uniform");
  CHECK(to_string(MeshStrategy::graded) == "graded");
  CHECK(to_string(MeshStrategy::adaptive) == "adaptive");
  CHECK(to_string(Branch::transport_on_uniform) == "transport");
  CHECK(to_string(Branch::convdiff_on_graded) == "convdiff");
}

TEST_CASE("adaptive selector switches at eps = h^(2k)") {
  const double h = 0.125;
  const double cut = std::pow(h, 4.0);  // k = 2
  CHECK(select_adaptive(0.5 * cut, h, 2) == Branch::transport_on_uniform);
  CHECK(select_adaptive(cut, h, 2) == Branch::convdiff_on_graded);
  CHECK(select_adaptive(2.0 * cut, h, 2) == Branch::convdiff_on_graded);
  CHECK(select_adaptive(0.0, h, 2) == Branch::transport_on_uniform);

  // k = 1 cuts at h^2
  CHECK(select_adaptive(0.05, 0.25, 1) == Branch::transport_on_uniform);
  CHECK(select_adaptive(0.0625, 0.25, 1) == Branch::convdiff_on_graded);
  CHECK(select_adaptive(0.07, 0.25, 1) == Branch::convdiff_on_graded);

  CHECK_THROWS_AS(select_adaptive(-1e-12, h, 2), std::invalid_argument);
}

TEST_CASE("step size is the ratio times the mesh width") {
  SolveConfig config;
  config.h = 0.25;
  config.tau_ratio = 0.5;
  CHECK(config.tau() == 0.125);
  config.tau_ratio = 0.1;
  CHECK(config.tau() == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("dispatch honors eps and the mesh strategy") {
  auto problem = shared_fixture("single_pipe");
  SolveConfig config;
  config.h = 0.25;
  config.k = 2;
  config.t_max = 0.5;  // keep the solves short

  config.eps = 0.0;
  SolveResult transport = solve(config, problem);
  CHECK(transport.branch == Branch::transport_on_uniform);
  CHECK(transport.eps_used == 0.0);
  CHECK(transport.mesh->n_elements() == 4);
  CHECK(transport.mesh->n_layer_elements() == 0);

  // eps below h^(2k) = 2^-8: adaptive prefers the transport branch
  config.eps = 1e-5;
  SolveResult adaptive = solve(config, problem);
  CHECK(adaptive.branch == Branch::transport_on_uniform);
  CHECK(adaptive.eps_used == 0.0);
  CHECK(adaptive.mesh->n_elements() == 4);

  // the same eps forced onto the diffusive branch resolves the layer
  config.strategy = MeshStrategy::graded;
  SolveResult forced = solve(config, problem);
  CHECK(forced.branch == Branch::convdiff_on_graded);
  CHECK(forced.eps_used == 1e-5);
  CHECK(forced.mesh->n_layer_elements() > 0);

  // large eps on the adaptive strategy goes diffusive as well
  config.strategy = MeshStrategy::adaptive;
  config.eps = 0.05;
  SolveResult diffusive = solve(config, problem);
  CHECK(diffusive.branch == Branch::convdiff_on_graded);
  CHECK(diffusive.eps_used == 0.05);
  CHECK(diffusive.mesh->n_layer_elements() > 0);

  // uniform strategy keeps eps but drops the grading
  config.strategy = MeshStrategy::uniform;
  SolveResult flat = solve(config, problem);
  CHECK(flat.branch == Branch::convdiff_on_graded);
  CHECK(flat.eps_used == 0.05);
  CHECK(flat.mesh->n_elements() == 4);
  CHECK(flat.mesh->n_layer_elements() == 0);

  config.eps = 0.0;
  CHECK_THROWS_AS(solve_convdiff(config, problem), std::invalid_argument);
}

TEST_CASE("run length override and record stride") {
  auto problem = shared_fixture("single_pipe");  // horizon 3
  SolveConfig config;
  config.eps = 0.0;
  config.h = 0.25;
  config.k = 1;

  SolveResult by_horizon = solve(config, problem);
  CHECK(by_horizon.trajectory.times.back() == 3.0);

  config.t_max = 1.25;
  SolveResult shorter = solve(config, problem);
  CHECK(shorter.trajectory.times.back() == 1.25);

  config.record_stride = 4;
  SolveResult sparse = solve(config, problem);
  // tau = 0.125: strides at 0.5 and 1.0, then the forced final time
  REQUIRE(sparse.trajectory.times.size() == 4);
  CHECK(sparse.trajectory.times[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sparse.trajectory.times[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sparse.trajectory.times.back() == 1.25);
}

TEST_CASE("transport solves obey the flow-weighted mixing rule") {
  auto problem =
      std::make_shared<const NetworkProblem>(pipedg::testing::junction_problem());
  SolveConfig config;
  config.eps = 0.0;
  config.h = 0.25;
  config.k = 2;
  config.t_max = 20.0;  // far past the ramps, the transient leaves the network
  SolveResult result = solve(config, problem);

  const int v3 = problem->topology->vertex_index("v3");
  const int dof = result.space->hybrid_vertex(v3);
  REQUIRE(dof >= 0);
  for (std::size_t i = 0; i < result.trajectory.times.size(); ++i) {
    CoefficientVector u = result.trajectory.state(i);
    CHECK(std::abs(u.values[dof] - upwind_mixture(u, v3)) <= 1e-9);
  }

  // saturated inflows 1 and 2 mix into (1*1 + 2*2) / 3 on the outgoing pipe
  CoefficientVector last = result.trajectory.state(
      result.trajectory.times.size() - 1);
  CHECK(last.values[dof] == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
  CHECK(evaluate(last, 2, 0.4, Side::left) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-9));
  CHECK(evaluate(last, 0, 0.6, Side::left) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(evaluate(last, 1, 0.6, Side::left) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("mixing rule on the eleven-vertex network") {
  auto problem = shared_fixture("gaslib11");
  SolveConfig config;
  config.eps = 0.0;
  config.h = 0.5;
  config.k = 1;
  SolveResult result = solve(config, problem);

  for (int v : problem->topology->interior_vertices()) {
    const int dof = result.space->hybrid_vertex(v);
    REQUIRE(dof >= 0);
    for (std::size_t i = 0; i < result.trajectory.times.size(); ++i) {
      CoefficientVector u = result.trajectory.state(i);
      CHECK(std::abs(u.values[dof] - upwind_mixture(u, v)) <= 1e-9);
    }
  }
}

TEST_CASE("layer probe flags boundary layers and only those") {
  auto problem = shared_fixture("single_pipe");
  SolveConfig config;
  config.h = 0.125;
  config.k = 2;
  config.t_max = 8.0;  // ramps hold 9 from t = 3 on; both branches settle

  config.eps = 0.05;
  SolveResult diffusive = solve(config, problem);
  REQUIRE(diffusive.branch == Branch::convdiff_on_graded);
  auto probes = layer_probe(diffusive, 0.05, 0.5);
  REQUIRE(probes.size() == 1);
  CHECK(probes[0].vertex == problem->topology->vertex_index("v2"));
  // steady state is ~9 upstream and drops toward the outflow datum 0
  CHECK(probes[0].upstream > 7.0);
  CHECK(probes[0].at_vertex < 2.0);
  CHECK(probes[0].difference > 5.0);
  CHECK(probes[0].flagged);

  config.eps = 0.0;
  SolveResult transport = solve(config, problem);
  auto quiet = layer_probe(transport, 0.05, 0.5);
  REQUIRE(quiet.size() == 1);
  // the settled transport state is constant 9; no layer, nothing to flag
  CHECK(quiet[0].at_vertex == doctest::Approx(9.0).epsilon(1e-8));
  CHECK(std::abs(quiet[0].difference) < 1e-6);
  CHECK(!quiet[0].flagged);
}

TEST_CASE("identical configurations reproduce bit-identical trajectories") {
  auto problem = shared_fixture("single_pipe");
  SolveConfig config;
  config.eps = 0.05;
  config.h = 0.25;
  config.k = 2;
  config.t_max = 1.0;
  SolveResult a = solve(config, problem);
  SolveResult b = solve(config, problem);
  REQUIRE(a.trajectory.times == b.trajectory.times);
  for (std::size_t i = 0; i < a.trajectory.states.size(); ++i)
    CHECK((a.trajectory.states[i] - b.trajectory.states[i]).norm() == 0.0);
}

} // TEST_SUITE
