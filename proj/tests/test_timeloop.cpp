#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracle_helpers.hpp"
#include "pipedg/timeloop.hpp"

using namespace pipedg;
using pipedg::testing::junction_problem;

namespace {

double rational_stability(double z) {
  return (60 + 24 * z + 3 * z * z) /
         (60 - 36 * z + 9 * z * z - z * z * z);
}

Eigen::SparseMatrix<double> sparse1x1(double v) {
  Eigen::SparseMatrix<double> m(1, 1);
  m.insert(0, 0) = v;
  m.makeCompressed();
  return m;
}

std::shared_ptr<const DiscreteSpace> space_on(NetworkMesh mesh, int k) {
  return std::make_shared<const DiscreteSpace>(
      std::make_shared<const NetworkMesh>(std::move(mesh)), k);
}

DiscreteSystem pipe_system(double eps, double h, int k) {
  auto problem = std::make_shared<const NetworkProblem>(load_fixture("single_pipe"));
  NetworkMesh mesh = eps > 0.0 ? build_graded(problem->topology, eps, h, k)
                               : build_uniform(problem->topology, h);
  return assemble_system(space_on(std::move(mesh), k), problem, 1.0);
}

} // namespace

TEST_SUITE("timeloop") {

TEST_CASE("tableau satisfies the collocation order conditions") {
  ButcherTableau t = radau_tableau();
  double r = std::sqrt(6.0);
  CHECK(t.c(0) == doctest::Approx((4 - r) / 10).epsilon(1e-15));
  CHECK(t.c(1) == doctest::Approx((4 + r) / 10).epsilon(1e-15));
  CHECK(t.c(2) == 1.0);
  CHECK((t.A.row(2).transpose() - t.b).norm() == 0.0);  // stiffly accurate

  for (int q = 1; q <= 5; ++q) {  // quadrature conditions up to order 5
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) sum += t.b(j) * std::pow(t.c(j), q - 1);
    CHECK(std::abs(sum - 1.0 / q) <= 1e-13);
  }
  for (int q = 1; q <= 3; ++q)  // stage consistency C(3)
    for (int i = 0; i < 3; ++i) {
      double sum = 0.0;
      for (int j = 0; j < 3; ++j) sum += t.A(i, j) * std::pow(t.c(j), q - 1);
      CHECK(std::abs(sum - std::pow(t.c(i), q) / q) <= 1e-13);
    }
}

TEST_CASE("stability function matches its rational closed form") {
  for (double z : {0.0, -0.5, -1.0, -5.0, -100.0, 0.3})
    CHECK(radau_stability(z) ==
          doctest::Approx(rational_stability(z)).epsilon(1e-12));
  CHECK(radau_stability(0.0) == doctest::Approx(1.0));
  // L-stability: the function dies off along the negative real axis
  CHECK(std::abs(radau_stability(-1e8)) < 1e-6);
  CHECK(std::abs(radau_stability(-3.0)) < 1.0);
}

TEST_CASE("scalar decay reproduces the stability function per step") {
  Eigen::SparseMatrix<double> mass = sparse1x1(1.0);
  Eigen::SparseMatrix<double> op = sparse1x1(2.0);  // u' = -2u
  RadauStepper stepper(mass, op, 0.1);
  auto no_load = [](double) -> Eigen::VectorXd {
    return Eigen::VectorXd::Zero(1);
  };
  Eigen::VectorXd u(1);
  u[0] = 1.0;
  u = stepper.step(u, 0.0, no_load);
  CHECK(std::abs(u[0] - radau_stability(-0.2)) <= 1e-12);
  for (int n = 1; n < 10; ++n) u = stepper.step(u, 0.1 * n, no_load);
  CHECK(std::abs(u[0] - std::pow(radau_stability(-0.2), 10)) <= 1e-12);
  CHECK(std::abs(u[0] - std::exp(-2.0)) <= 2e-8);  // order-5 accuracy
}

TEST_CASE("algebraic rows are enforced at every step") {
  // M = diag(1, 0) couples an ODE with the constraint u2 = u1
  Eigen::SparseMatrix<double> mass(2, 2), op(2, 2);
  mass.insert(0, 0) = 1.0;
  op.insert(0, 0) = 2.0;
  op.insert(1, 0) = -1.0;
  op.insert(1, 1) = 1.0;
  mass.makeCompressed();
  op.makeCompressed();
  RadauStepper stepper(mass, op, 0.1);
  auto no_load = [](double) -> Eigen::VectorXd {
    return Eigen::VectorXd::Zero(2);
  };
  Eigen::VectorXd u(2);
  u << 1.0, 1.0;
  u = stepper.step(u, 0.0, no_load);
  CHECK(std::abs(u[0] - radau_stability(-0.2)) <= 1e-12);
  CHECK(std::abs(u[1] - u[0]) <= 1e-13);
}

TEST_CASE("an unsolvable algebraic block is reported") {
  Eigen::SparseMatrix<double> mass(2, 2), op(2, 2);
  mass.insert(0, 0) = 1.0;
  op.insert(0, 0) = 2.0;  // second row identically zero
  mass.makeCompressed();
  op.makeCompressed();
  CHECK_THROWS_WITH_AS(RadauStepper(mass, op, 0.1),
                       doctest::Contains("factorization failed"),
                       std::runtime_error);
  CHECK_THROWS_AS(RadauStepper(mass, op, 0.0), std::invalid_argument);
}

TEST_CASE("constant states are fixed points of the stepper") {
  auto problem = std::make_shared<const NetworkProblem>(
      load_network("[vertices] v1 v2\n[edges] e1 v1 v2 1 1\n"
                   "[boundary] v1 ramp 2 3 v2 ramp 2 3\n[horizon] 3\n"));
  auto space = space_on(build_graded(problem->topology, 0.05, 0.25, 2), 2);
  DiscreteSystem system = assemble_system(space, problem, 1.0);
  const double eps = 0.05;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(space->dimension());
  for (int e = 0; e < 1; ++e)
    for (int t = 0; t < space->element_count(e); ++t)
      u[space->bulk_start(e, t)] = 2.0 * std::sqrt(space->mesh().edges[e].width(t));
  for (int i = space->n_bulk(); i < space->dimension(); ++i) u[i] = 2.0;

  // past the ramp horizon the data is frozen at 2
  Eigen::VectorXd next = step(system, eps, u, 5.0, 0.25);
  CHECK((next - u).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("trajectory recording covers start, stride and exact final time") {
  DiscreteSystem system = pipe_system(0.0, 0.5, 1);

  Trajectory every = integrate(system, 0.0, 0.5, 3.0);
  REQUIRE(every.times.size() == 7);
  CHECK(every.times.front() == 0.0);
  CHECK(every.times.back() == 3.0);
  CHECK(every.times[1] == doctest::Approx(0.5));
  CHECK(every.states[0].norm() == 0.0);

  // a non-dividing step finishes with a shortened one
  Trajectory odd = integrate(system, 0.0, 0.4, 1.0);
  REQUIRE(odd.times.size() == 4);
  CHECK(odd.times[1] == doctest::Approx(0.4));
  CHECK(odd.times[2] == doctest::Approx(0.8));
  CHECK(odd.times.back() == 1.0);

  Trajectory strided = integrate(system, 0.0, 0.4, 1.0, 2);
  REQUIRE(strided.times.size() == 3);
  CHECK(strided.times[1] == doctest::Approx(0.8));
  CHECK(strided.times.back() == 1.0);

  CHECK_THROWS_AS(integrate(system, 0.0, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate(system, 0.0, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("quiet boundaries keep the system at rest") {
  auto problem = std::make_shared<const NetworkProblem>(
      load_network("[vertices] a b\n[edges] e a b 1 1\n"
                   "[boundary] a zero b zero\n[horizon] 1\n"));
  auto space = space_on(build_uniform(problem->topology, 0.25), 2);
  DiscreteSystem system = assemble_system(space, problem, 1.0);
  Trajectory traj = integrate(system, 0.0, 0.125, 1.0);
  for (const Eigen::VectorXd& state : traj.states) CHECK(state.norm() == 0.0);
}

TEST_CASE("solution scales linearly with the boundary data") {
  auto full = std::make_shared<const NetworkProblem>(load_fixture("single_pipe"));
  std::string halved = serialize(*full);
  auto pos = halved.find("ramp 9 3");
  REQUIRE(pos != std::string::npos);
  halved.replace(pos, 8, "ramp 4.5 3");
  auto half = std::make_shared<const NetworkProblem>(load_network(halved));

  auto space = space_on(build_uniform(full->topology, 0.25), 2);
  Trajectory a = integrate(assemble_system(space, full, 1.0), 0.0, 0.125, 3.0);
  Trajectory b = integrate(assemble_system(space, half, 1.0), 0.0, 0.125, 3.0);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i)
    CHECK((a.states[i] - 2.0 * b.states[i]).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("hybrid constraints hold at every recorded time") {
  auto problem = std::make_shared<const NetworkProblem>(junction_problem());
  for (double eps : {0.0, 0.05}) {
    NetworkMesh mesh = eps > 0.0 ? build_graded(problem->topology, eps, 0.25, 2)
                                 : build_uniform(problem->topology, 0.25);
    auto space = space_on(std::move(mesh), 2);
    DiscreteSystem system = assemble_system(space, problem, 1.0);
    Trajectory traj = integrate(system, eps, 0.125, 2.0);
    Eigen::SparseMatrix<double> op = system.spatial_operator(eps);
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
      Eigen::VectorXd residual =
          op * traj.states[i] - system.load(eps, traj.times[i]);
      CHECK(residual.tail(space->n_hybrid()).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("cubic ramps are integrated without temporal error") {
  // the collocation polynomial has degree 3, so the fixture's t^3 data
  // leaves nothing for the step size to improve on
  DiscreteSystem system = pipe_system(1e-2, 0.25, 2);
  Eigen::VectorXd ref = integrate(system, 1e-2, 3.0 / 192, 3.0).states.back();
  Eigen::VectorXd u = integrate(system, 1e-2, 0.25, 3.0).states.back();
  CHECK((u - ref).head(system.space->n_bulk()).norm() <= 1e-12);
}

TEST_CASE("temporal self-convergence is at least third order") {
  // quartic data escapes the collocation space and exposes the rate
  auto problem = std::make_shared<const NetworkProblem>(
      load_network("[vertices] v1 v2\n[edges] e1 v1 v2 1 1\n"
                   "[boundary] v1 ramp 9 4 v2 zero\n[horizon] 3\n"));
  auto space = space_on(build_graded(problem->topology, 1e-2, 0.25, 2), 2);
  DiscreteSystem system = assemble_system(space, problem, 1.0);
  Eigen::VectorXd ref = integrate(system, 1e-2, 3.0 / 768, 3.0).states.back();
  std::vector<double> errors;
  for (double tau : {0.25, 0.125, 0.0625}) {
    Eigen::VectorXd u = integrate(system, 1e-2, tau, 3.0).states.back();
    errors.push_back((u - ref).head(system.space->n_bulk()).norm());
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    double slope = std::log2(errors[i] / errors[i + 1]);
    CHECK(slope >= 2.6);
    CHECK(slope <= 5.5);
  }
}

} // TEST_SUITE
