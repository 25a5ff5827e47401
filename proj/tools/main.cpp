#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pipedg/experiment.hpp"
#include "pipedg/format.hpp"

namespace {

// accepts "0.125" and "1/8"
double parse_width(const std::string& token) {
  auto slash = token.find('/');
  if (slash == std::string::npos) return std::stod(token);
  double num = std::stod(token.substr(0, slash));
  double den = std::stod(token.substr(slash + 1));
  return num / den;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(sep, start);
    if (end == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

// "1/8:1/64" halving range, or comma list of widths
std::vector<double> parse_h_list(const std::string& text) {
  std::vector<double> out;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    double h = parse_width(text.substr(0, colon));
    double end = parse_width(text.substr(colon + 1));
    if (!(h > 0.0) || !(end > 0.0) || end > h)
      throw CLI::ValidationError("--h", "range must halve from coarse to fine");
    for (; h > end * (1.0 - 1e-9); h *= 0.5) out.push_back(h);
    return out;
  }
  for (const std::string& part : split(text, ','))
    out.push_back(parse_width(part));
  return out;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ','))
    out.push_back(std::stod(part));
  return out;
}

// "t=1,2.5" -> {1, 2.5}
std::vector<double> parse_snapshots(const std::string& text) {
  std::string body = text;
  if (body.rfind("t=", 0) == 0) body = body.substr(2);
  std::vector<double> out;
  for (const std::string& part : split(body, ','))
    out.push_back(std::stod(part));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid dG solver for convection-diffusion on pipe networks"};
  app.set_version_flag("--version", std::string("pipedg ") + pipedg::kVersion);
  // keep the short -h free for the mesh width option below
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run a convergence sweep");
  run->set_help_flag("--help", "Print this help message and exit");
  std::string fixture, network_path, h_text = "1/8", eps_text = "0";
  std::string mesh_text = "adaptive", snapshot_text, out_dir = ".";
  pipedg::ExperimentPlan plan;
  auto* fixture_opt =
      run->add_option("--fixture", fixture, "Embedded network fixture")
          ->check(CLI::IsMember({"single_pipe", "gaslib11"}));
  auto* network_opt = run->add_option("--network", network_path,
                                      "Network document file");
  fixture_opt->excludes(network_opt);
  run->add_option("--k", plan.k, "Polynomial order")->check(CLI::Range(1, 8));
  run->add_option("--alpha", plan.alpha, "Jump penalty");
  run->add_option("--eps", eps_text, "Comma list of diffusion values");
  run->add_option("--h", h_text,
                  "Comma list of widths or coarse:fine halving range");
  run->add_option("--tau-ratio", plan.tau_ratio, "Step size as fraction of h");
  run->add_option("--tmax", plan.t_max, "Integration horizon override");
  run->add_option("--mesh", mesh_text, "Mesh strategy")
      ->check(CLI::IsMember({"uniform", "graded", "adaptive"}));
  run->add_option("--snapshot", snapshot_text, "Snapshot times, t=<list>");
  run->add_option("--snapshot-samples", plan.snapshot_samples,
                  "Sample points per element in snapshots");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", plan.jobs, "Worker threads (0 = all cores)");
  run->add_option("--flow-tol", plan.flow_tol,
                  "Allowed flow-conservation residual at junctions");

  CLI11_PARSE(app, argc, argv);

  try {
    plan.fixture = fixture;
    plan.network_path = network_path;
    plan.out_dir = out_dir;
    plan.eps_list = parse_eps_list(eps_text);
    plan.h_list = parse_h_list(h_text);
    if (!snapshot_text.empty())
      plan.snapshot_times = parse_snapshots(snapshot_text);
    if (mesh_text == "uniform")
      plan.strategy = pipedg::MeshStrategy::uniform;
    else if (mesh_text == "graded")
      plan.strategy = pipedg::MeshStrategy::graded;
    else
      plan.strategy = pipedg::MeshStrategy::adaptive;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  pipedg::ExperimentResult result = pipedg::run_experiment(plan);
  if (result.exit_code == 2) {
    std::cerr << "error: " << result.diagnostic << "\n";
    return 2;
  }
  if (!result.diagnostic.empty())
    std::cerr << "warning: " << result.diagnostic << "\n";

  for (const pipedg::RunRecord& r : result.records) {
    std::printf("%-9s eps=%-8s h=%-10s N=%-5zu error=%-13s eoc=%-8s %s\n",
                to_string(r.branch).c_str(), pipedg::format_g(r.eps).c_str(),
                pipedg::format_g(r.h).c_str(), r.n_elements,
                pipedg::format_g(r.error).c_str(),
                pipedg::format_g(r.eoc).c_str(),
                r.status == "ok" ? "" : r.status.c_str());
  }
  std::printf("wrote %zu files to %s\n", result.outputs.size(),
              plan.out_dir.c_str());
  return result.exit_code;
}
