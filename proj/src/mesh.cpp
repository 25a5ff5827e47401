#include "pipedg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pipedg {

std::size_t NetworkMesh::n_elements() const {
  std::size_t n = 0;
  for (const EdgeMesh& e : edges) n += e.n_elements();
  return n;
}

std::size_t NetworkMesh::n_layer_elements() const {
  std::size_t n = 0;
  for (const EdgeMesh& e : edges)
    for (MeshRegion r : e.region)
      if (r == MeshRegion::layer) ++n;
  return n;
}

double NetworkMesh::max_width() const {
  double h = 0.0;
  for (const EdgeMesh& e : edges)
    for (std::size_t i = 0; i < e.n_elements(); ++i)
      h = std::max(h, e.width(i));
  return h;
}

namespace {

void check_target_width(const NetworkTopology& topology, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("mesh width must be positive");
  if (h > topology.min_edge_length())
    throw std::invalid_argument(
        "mesh width exceeds the shortest edge length");
}

EdgeMesh uniform_edge(double length, double h) {
  EdgeMesh mesh;
  auto m = static_cast<std::size_t>(std::ceil(length / h - 1e-12));
  m = std::max<std::size_t>(m, 1);
  mesh.breakpoints.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    mesh.breakpoints[i] = length * static_cast<double>(i) / m;
  mesh.region.assign(m, MeshRegion::uniform);
  return mesh;
}

EdgeMesh graded_edge(double length, double velocity, double eps, double h,
                     int k) {
  double xstar = transition_point(length, velocity, eps, k);
  if (xstar >= length) {
    EdgeMesh mesh = uniform_edge(length, h);
    mesh.transition = std::nullopt;
    return mesh;
  }

  // Layer breakpoints right to left; the next width follows the current
  // right endpoint, so the element touching the outflow has width eps * h.
  const double efold = eps * (k + 1) / velocity;
  std::vector<double> rights{length};
  double r = length;
  while (true) {
    double w = eps * h * std::exp((length - r) / efold);
    double p = r - w;
    if (p <= xstar) break;
    double next = eps * h * std::exp((length - p) / efold);
    if (p - xstar < 0.25 * next) break;  // avoid closing with a sliver
    rights.push_back(p);
    r = p;
  }

  EdgeMesh mesh;
  // uniform breakpoints inherited below the transition point
  auto m = static_cast<std::size_t>(std::ceil(length / h - 1e-12));
  m = std::max<std::size_t>(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    double x = length * static_cast<double>(i) / m;
    if (x < xstar - 1e-12 * length)
      mesh.breakpoints.push_back(x);
    else
      break;
  }
  mesh.breakpoints.push_back(xstar);
  mesh.region.assign(mesh.breakpoints.size() - 1, MeshRegion::uniform);
  for (auto it = rights.rbegin(); it != rights.rend(); ++it) {
    mesh.breakpoints.push_back(*it);
    mesh.region.push_back(MeshRegion::layer);
  }
  mesh.transition = xstar;
  if (h < 1.0)
    mesh.shishkin =
        length - (k + 1) / velocity * eps * std::log(1.0 / h);
  return mesh;
}

} // namespace

NetworkMesh build_uniform(std::shared_ptr<const NetworkTopology> topology,
                          double h) {
  check_target_width(*topology, h);
  NetworkMesh mesh;
  mesh.topology = std::move(topology);
  mesh.target_h = h;
  for (const Edge& e : mesh.topology->edges)
    mesh.edges.push_back(uniform_edge(e.length, h));
  return mesh;
}

double transition_point(double length, double velocity, double eps, int k) {
  if (!(eps > 0.0)) throw std::invalid_argument("transition_point: eps must be positive");
  if (!(velocity > 0.0)) throw std::invalid_argument("transition_point: velocity must be positive");
  if (k < 1) throw std::invalid_argument("transition_point: order must be at least 1");
  if (eps >= 1.0) return length;
  double raw = length - (k + 1) / velocity * eps * std::log(1.0 / eps);
  return std::max(raw, 0.5 * length);
}

NetworkMesh build_graded(std::shared_ptr<const NetworkTopology> topology,
                         double eps, double h, int k) {
  if (eps == 0.0) return build_uniform(std::move(topology), h);
  if (!(eps > 0.0)) throw std::invalid_argument("build_graded: eps must be nonnegative");
  check_target_width(*topology, h);
  NetworkMesh mesh;
  mesh.topology = std::move(topology);
  mesh.target_h = h;
  mesh.eps = eps;
  mesh.order = k;
  for (const Edge& e : mesh.topology->edges)
    mesh.edges.push_back(graded_edge(e.length, e.velocity, eps, h, k));
  return mesh;
}

NetworkMesh refine(const NetworkMesh& mesh) {
  NetworkMesh fine;
  fine.topology = mesh.topology;
  fine.target_h = 0.5 * mesh.target_h;
  fine.eps = mesh.eps;
  fine.order = mesh.order;
  for (const EdgeMesh& e : mesh.edges) {
    EdgeMesh f;
    f.transition = e.transition;
    f.shishkin = e.shishkin;
    f.breakpoints.reserve(2 * e.breakpoints.size() - 1);
    f.region.reserve(2 * e.region.size());
    for (std::size_t i = 0; i < e.n_elements(); ++i) {
      f.breakpoints.push_back(e.breakpoints[i]);
      f.breakpoints.push_back(0.5 * (e.breakpoints[i] + e.breakpoints[i + 1]));
      f.region.push_back(e.region[i]);
      f.region.push_back(e.region[i]);
    }
    f.breakpoints.push_back(e.breakpoints.back());
    fine.edges.push_back(std::move(f));
  }
  return fine;
}

MeshStats mesh_stats(const NetworkMesh& mesh, double eps, int k) {
  MeshStats s;
  s.min_width = std::numeric_limits<double>::infinity();
  s.min_layer_width = std::numeric_limits<double>::infinity();
  for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
    const EdgeMesh& e = mesh.edges[ei];
    const Edge& edge = mesh.topology->edges[ei];
    double shishkin = e.length();
    if (eps > 0.0 && eps < 1.0 && mesh.target_h < 1.0)
      shishkin = e.length() -
                 (k + 1) / edge.velocity * eps * std::log(1.0 / mesh.target_h);
    for (std::size_t i = 0; i < e.n_elements(); ++i) {
      double w = e.width(i);
      s.n_elements += 1;
      s.min_width = std::min(s.min_width, w);
      s.max_width = std::max(s.max_width, w);
      if (e.region[i] == MeshRegion::layer) {
        s.n_layer += 1;
        s.min_layer_width = std::min(s.min_layer_width, w);
        if (e.breakpoints[i] < shishkin) s.n_layer_coarse_side += 1;
      } else {
        s.n_uniform += 1;
      }
    }
  }
  if (s.n_layer == 0) s.min_layer_width = 0.0;
  return s;
}

std::string mesh_csv(const NetworkMesh& mesh) {
  std::ostringstream out;
  out << "edge_id,index,x_left,width,region\n";
  char buf[64];
  for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
    const EdgeMesh& e = mesh.edges[ei];
    for (std::size_t i = 0; i < e.n_elements(); ++i) {
      out << mesh.topology->edges[ei].id << ',' << i << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", e.breakpoints[i]);
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", e.width(i));
      out << buf << ','
          << (e.region[i] == MeshRegion::layer ? "layer" : "uniform") << '\n';
    }
  }
  return out.str();
}

} // namespace pipedg
