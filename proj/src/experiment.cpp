#include "pipedg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "pipedg/format.hpp"

namespace pipedg {

namespace {

using nlohmann::json;

std::size_t nearest_time_index(const std::vector<double>& times, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  return best;
}

} // namespace

std::string snapshot_csv(const Trajectory& traj, double time,
                         int samples_per_element) {
  std::size_t idx = nearest_time_index(traj.times, time);
  CoefficientVector u = traj.state(idx);
  const DiscreteSpace& space = *traj.space;
  const NetworkTopology& topo = space.topology();
  const int n = std::max(samples_per_element, 2);
  std::ostringstream out;
  out << "time,edge_id,x,value\n";
  std::string t_text = format_g17(traj.times[idx]);
  for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
    const EdgeMesh& em = space.mesh().edges[e];
    for (int el = 0; el < space.element_count(e); ++el) {
      double a = em.breakpoints[el];
      double width = em.width(el);
      for (int q = 0; q < n; ++q) {
        double x = a + width * q / (n - 1);
        Side side = q == 0 ? Side::right : Side::left;
        out << t_text << ',' << topo.edges[e].id << ',' << format_g17(x) << ','
            << format_g17(evaluate(u, e, x, side)) << '\n';
      }
    }
  }
  return out.str();
}

std::string error_report_csv(const ExperimentPlan& plan,
                             const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "branch,k,alpha,epsilon,h,tau,N_elements,N_layer,error,eoc\n";
  for (const RunRecord& r : records)
    out << to_string(r.branch) << ',' << plan.k << ','
        << format_g17(plan.alpha) << ',' << format_g17(r.eps) << ','
        << format_g17(r.h) << ',' << format_g17(r.tau) << ',' << r.n_elements
        << ',' << r.n_layer << ',' << format_g17(r.error) << ','
        << format_g17(r.eoc) << '\n';
  return out.str();
}

std::string plot_data_csv(const ExperimentPlan& plan,
                          const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "h";
  for (double eps : plan.eps_list) out << ",eps=" << format_g(eps);
  out << '\n';
  for (std::size_t hi = 0; hi < plan.h_list.size(); ++hi) {
    out << format_g17(plan.h_list[hi]);
    for (std::size_t ei = 0; ei < plan.eps_list.size(); ++ei)
      out << ',' << format_g17(records[ei * plan.h_list.size() + hi].error);
    out << '\n';
  }
  return out.str();
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  ExperimentResult result;

  std::shared_ptr<const NetworkProblem> problem;
  try {
    if (plan.fixture.empty() == plan.network_path.empty())
      throw network_error("give exactly one of fixture or network path");
    if (plan.eps_list.empty() || plan.h_list.empty())
      throw std::invalid_argument("empty sweep lists");
    if (plan.k < 1) throw std::invalid_argument("order k must be at least 1");
    if (!(plan.alpha > 0.0))
      throw std::invalid_argument("alpha must be positive");
    if (!(plan.tau_ratio > 0.0))
      throw std::invalid_argument("tau ratio must be positive");
    NetworkProblem loaded =
        plan.fixture.empty()
            ? load_network_file(plan.network_path, plan.flow_tol)
            : load_fixture(plan.fixture);
    problem = std::make_shared<const NetworkProblem>(std::move(loaded));
  } catch (const std::exception& ex) {
    result.exit_code = 2;
    result.diagnostic = ex.what();
    return result;
  }
  if (auto warning = compatibility_warning(*problem, plan.k))
    result.diagnostic = *warning;

  const std::size_t n_entries = plan.eps_list.size() * plan.h_list.size();
  result.records.resize(n_entries);
  struct Snapshot {
    std::string name;
    std::string text;
  };
  std::vector<std::vector<Snapshot>> snapshots(n_entries);

  auto worker_body = [&](std::size_t index) {
    const std::size_t ei = index / plan.h_list.size();
    const std::size_t hi = index % plan.h_list.size();
    RunRecord& record = result.records[index];
    record.eps = plan.eps_list[ei];
    record.h = plan.h_list[hi];
    record.tau = plan.tau_ratio * record.h;
    auto start = std::chrono::steady_clock::now();
    try {
      SolveConfig config;
      config.eps = record.eps;
      config.h = record.h;
      config.k = plan.k;
      config.alpha = plan.alpha;
      config.tau_ratio = plan.tau_ratio;
      config.t_max = plan.t_max;
      config.strategy = plan.strategy;
      SolveResult run = solve(config, problem);
      record.branch = run.branch;
      record.n_elements = run.mesh->n_elements();
      record.n_layer = run.mesh->n_layer_elements();
      record.n_dof = run.space->dimension();
      SolveResult reference =
          compute_reference(config, problem, *run.mesh, run.eps_used);
      record.error = error_ref(run.trajectory, reference.trajectory);
      for (std::size_t ti = 0; ti < plan.snapshot_times.size(); ++ti) {
        std::string name = "snap_e" + std::to_string(ei) + "_h" +
                           std::to_string(hi) + "_t" + std::to_string(ti) +
                           ".csv";
        snapshots[index].push_back(
            {name, snapshot_csv(run.trajectory, plan.snapshot_times[ti],
                                plan.snapshot_samples)});
        record.artifacts.push_back(name);
      }
    } catch (const std::exception& ex) {
      record.status = ex.what();
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  };

  unsigned jobs = plan.jobs > 0 ? static_cast<unsigned>(plan.jobs)
                                : std::thread::hardware_concurrency();
  jobs = std::max(1u, std::min<unsigned>(jobs, n_entries));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n_entries; ++i) worker_body(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n_entries;
             i = next.fetch_add(1))
          worker_body(i);
      });
    for (std::thread& t : pool) t.join();
  }

  // EOC between adjacent halving entries of the same eps series
  for (std::size_t ei = 0; ei < plan.eps_list.size(); ++ei)
    for (std::size_t hi = 1; hi < plan.h_list.size(); ++hi) {
      RunRecord& prev = result.records[ei * plan.h_list.size() + hi - 1];
      RunRecord& cur = result.records[ei * plan.h_list.size() + hi];
      if (prev.status == "ok" && cur.status == "ok" &&
          std::abs(cur.h - 0.5 * prev.h) <= 1e-9 * prev.h)
        cur.eoc = std::log2(prev.error / cur.error);
    }

  namespace fs = std::filesystem;
  fs::path out_dir(plan.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  auto write_file = [&](const std::string& name, const std::string& text) {
    std::ofstream out(out_dir / name, std::ios::binary);
    out << text;
    result.outputs.push_back(name);
  };
  write_file("errors.csv", error_report_csv(plan, result.records));
  write_file("plot.csv", plot_data_csv(plan, result.records));
  for (const auto& entry : snapshots)
    for (const Snapshot& snap : entry) write_file(snap.name, snap.text);

  json manifest;
  manifest["version"] = kVersion;
  manifest["plan"] = {
      {"fixture", plan.fixture},
      {"network_path", plan.network_path},
      {"flow_tol", plan.flow_tol},
      {"eps", plan.eps_list},
      {"h", plan.h_list},
      {"k", plan.k},
      {"alpha", plan.alpha},
      {"tau_ratio", plan.tau_ratio},
      {"t_max", plan.t_max},
      {"mesh", to_string(plan.strategy)},
      {"snapshot_times", plan.snapshot_times},
      {"snapshot_samples", plan.snapshot_samples},
      {"jobs", plan.jobs},
  };
  manifest["network_document"] = plan.fixture.empty()
                                     ? std::string("(external file)")
                                     : fixture_document(plan.fixture);
  manifest["t_horizon"] = problem->t_max;
  if (!result.diagnostic.empty()) manifest["warning"] = result.diagnostic;
  manifest["entries"] = json::array();
  for (const RunRecord& r : result.records)
    manifest["entries"].push_back({
        {"eps", r.eps},
        {"h", r.h},
        {"tau", r.tau},
        {"branch", to_string(r.branch)},
        {"n_elements", r.n_elements},
        {"n_layer", r.n_layer},
        {"n_dof", r.n_dof},
        {"error", r.error},
        {"eoc", r.eoc},
        {"wall_ms", r.wall_ms},
        {"status", r.status},
        {"artifacts", r.artifacts},
    });
  manifest["outputs"] = result.outputs;
  write_file("manifest.json", manifest.dump(2) + "\n");

  for (const RunRecord& r : result.records)
    if (r.status != "ok") result.exit_code = 3;
  return result;
}

} // namespace pipedg
