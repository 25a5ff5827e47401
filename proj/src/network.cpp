#include "pipedg/network.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace pipedg {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, const std::string& what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty())
    throw network_error("invalid number '" + token + "' in " + what);
  return v;
}

int parse_int(const std::string& token, const std::string& what) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(token, &pos);
  } catch (const std::exception&) {
    throw network_error("invalid integer '" + token + "' in " + what);
  }
  if (pos != token.size())
    throw network_error("invalid integer '" + token + "' in " + what);
  return v;
}

} // namespace

int NetworkTopology::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertex_ids.size(); ++i)
    if (vertex_ids[i] == id) return static_cast<int>(i);
  return -1;
}

int NetworkTopology::edge_index(const std::string& id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return static_cast<int>(i);
  return -1;
}

int NetworkTopology::incidence(int edge, int vertex) const {
  const Edge& e = edges[edge];
  if (e.head == vertex) return 1;
  if (e.tail == vertex) return -1;
  return 0;
}

std::vector<int> NetworkTopology::interior_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < vertex_ids.size(); ++v)
    if (!is_boundary(static_cast<int>(v))) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> NetworkTopology::boundary_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < vertex_ids.size(); ++v)
    if (is_boundary(static_cast<int>(v))) out.push_back(static_cast<int>(v));
  return out;
}

double NetworkTopology::min_edge_length() const {
  double m = edges.front().length;
  for (const Edge& e : edges) m = std::min(m, e.length);
  return m;
}

NetworkTopology make_topology(std::vector<std::string> vertex_ids,
                              std::vector<Edge> edges) {
  if (vertex_ids.empty()) throw network_error("network has no vertices");
  if (edges.empty()) throw network_error("network has no edges");

  NetworkTopology t;
  t.vertex_ids = std::move(vertex_ids);
  t.edges = std::move(edges);

  for (std::size_t i = 0; i < t.vertex_ids.size(); ++i)
    for (std::size_t j = i + 1; j < t.vertex_ids.size(); ++j)
      if (t.vertex_ids[i] == t.vertex_ids[j])
        throw network_error("duplicate vertex id '" + t.vertex_ids[i] + "'");
  for (std::size_t i = 0; i < t.edges.size(); ++i)
    for (std::size_t j = i + 1; j < t.edges.size(); ++j)
      if (t.edges[i].id == t.edges[j].id)
        throw network_error("duplicate edge id '" + t.edges[i].id + "'");

  const int n = static_cast<int>(t.vertex_ids.size());
  t.edges_in.assign(n, {});
  t.edges_out.assign(n, {});
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    Edge& e = t.edges[k];
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw network_error("edge '" + e.id + "' references an unknown vertex");
    if (e.tail == e.head)
      throw network_error("edge '" + e.id + "' is a self loop");
    if (!(e.length > 0.0))
      throw network_error("edge '" + e.id + "' has nonpositive length");
    if (!(e.velocity > 0.0))
      throw network_error("edge '" + e.id +
                          "' has nonpositive velocity; edges must be oriented "
                          "with the flow (reorient instead of negating)");
    t.edges_out[e.tail].push_back(static_cast<int>(k));
    t.edges_in[e.head].push_back(static_cast<int>(k));
  }

  // weak connectivity
  std::vector<char> seen(n, 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    for (int e : t.edges_out[v])
      if (!seen[t.edges[e].head]) {
        seen[t.edges[e].head] = 1;
        queue.push(t.edges[e].head);
      }
    for (int e : t.edges_in[v])
      if (!seen[t.edges[e].tail]) {
        seen[t.edges[e].tail] = 1;
        queue.push(t.edges[e].tail);
      }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[v])
      throw network_error("network is not connected (vertex '" +
                          t.vertex_ids[v] + "' is unreachable)");

  t.vertex_class.resize(n);
  for (int v = 0; v < n; ++v) {
    std::size_t degree = t.edges_in[v].size() + t.edges_out[v].size();
    if (degree == 1)
      t.vertex_class[v] = t.edges_out[v].empty() ? VertexClass::outflow
                                                 : VertexClass::inflow;
    else
      t.vertex_class[v] = VertexClass::interior;
  }
  return t;
}

double TimeProfile::value(double t) const {
  if (kind == Kind::zero || t <= 0.0) return 0.0;
  if (t >= horizon) return coefficient;  // ramp holds its terminal value
  return coefficient * std::pow(t / horizon, exponent);
}

int TimeProfile::vanishing_order() const {
  if (kind == Kind::zero || coefficient == 0.0) return INT_MAX;
  return exponent - 1;
}

int NetworkProblem::compatibility_order() const {
  int m = INT_MAX;
  for (int v : topology->boundary_vertices())
    m = std::min(m, boundary[v].vanishing_order());
  return m;
}

std::vector<FlowResidual> flow_residuals(const NetworkTopology& topology) {
  std::vector<FlowResidual> out;
  for (int v : topology.interior_vertices()) {
    double r = 0.0;
    for (int e : topology.edges_in[v]) r += topology.edges[e].velocity;
    for (int e : topology.edges_out[v]) r -= topology.edges[e].velocity;
    out.push_back({v, r});
  }
  return out;
}

void validate_flow_conservation(const NetworkTopology& topology, double tol) {
  std::string offenders;
  for (const FlowResidual& r : flow_residuals(topology)) {
    if (std::abs(r.residual) > tol) {
      if (!offenders.empty()) offenders += ", ";
      offenders += topology.vertex_ids[r.vertex] + " (residual " +
                   format_double(r.residual) + ")";
    }
  }
  if (!offenders.empty())
    throw network_error("flow conservation violated at: " + offenders);
}

namespace {

struct Document {
  std::vector<std::string> vertices;
  std::vector<std::string> edges;
  std::vector<std::string> boundary;
  std::vector<std::string> horizon;
};

Document tokenize(const std::string& text) {
  Document doc;
  std::vector<std::string>* section = nullptr;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream words(line);
    std::string token;
    while (words >> token) {
      if (token.front() == '[') {
        if (token == "[vertices]")
          section = &doc.vertices;
        else if (token == "[edges]")
          section = &doc.edges;
        else if (token == "[boundary]")
          section = &doc.boundary;
        else if (token == "[horizon]")
          section = &doc.horizon;
        else
          throw network_error("unknown section " + token);
      } else {
        if (!section)
          throw network_error("token '" + token + "' before any section");
        section->push_back(token);
      }
    }
  }
  return doc;
}

} // namespace

NetworkProblem load_network(const std::string& text, double flow_tol) {
  Document doc = tokenize(text);

  if (doc.edges.size() % 5 != 0)
    throw network_error(
        "[edges] entries must be: id tail head length velocity");

  std::vector<Edge> edges;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < doc.vertices.size(); ++i) {
    if (!index.emplace(doc.vertices[i], static_cast<int>(i)).second)
      throw network_error("duplicate vertex id '" + doc.vertices[i] + "'");
  }
  for (std::size_t i = 0; i < doc.edges.size(); i += 5) {
    Edge e;
    e.id = doc.edges[i];
    auto tail = index.find(doc.edges[i + 1]);
    auto head = index.find(doc.edges[i + 2]);
    if (tail == index.end())
      throw network_error("edge '" + e.id + "' references unknown vertex '" +
                          doc.edges[i + 1] + "'");
    if (head == index.end())
      throw network_error("edge '" + e.id + "' references unknown vertex '" +
                          doc.edges[i + 2] + "'");
    e.tail = tail->second;
    e.head = head->second;
    e.length = parse_double(doc.edges[i + 3], "edge '" + e.id + "' length");
    e.velocity = parse_double(doc.edges[i + 4], "edge '" + e.id + "' velocity");
    edges.push_back(std::move(e));
  }

  NetworkProblem problem;
  problem.topology = std::make_shared<const NetworkTopology>(
      make_topology(doc.vertices, std::move(edges)));
  validate_flow_conservation(*problem.topology, flow_tol);

  if (doc.horizon.size() > 1)
    throw network_error("[horizon] must contain a single time");
  problem.t_max =
      doc.horizon.empty() ? 1.0 : parse_double(doc.horizon[0], "[horizon]");
  if (!(problem.t_max > 0.0))
    throw network_error("time horizon must be positive");

  problem.boundary.assign(problem.topology->vertex_ids.size(), TimeProfile{});
  std::vector<char> given(problem.boundary.size(), 0);
  std::size_t pos = 0;
  const auto& tokens = doc.boundary;
  while (pos < tokens.size()) {
    if (pos + 1 >= tokens.size())
      throw network_error("[boundary] entry is missing a profile kind");
    int v = problem.topology->vertex_index(tokens[pos]);
    if (v < 0)
      throw network_error("[boundary] references unknown vertex '" +
                          tokens[pos] + "'");
    if (!problem.topology->is_boundary(v))
      throw network_error("[boundary] profile given for interior vertex '" +
                          tokens[pos] + "'");
    if (given[v])
      throw network_error("duplicate boundary profile for vertex '" +
                          tokens[pos] + "'");
    given[v] = 1;
    const std::string& kind = tokens[pos + 1];
    TimeProfile profile;
    profile.horizon = problem.t_max;
    if (kind == "zero") {
      pos += 2;
    } else if (kind == "ramp") {
      if (pos + 3 >= tokens.size())
        throw network_error("ramp profile needs: <vertex> ramp <c> <p>");
      profile.kind = TimeProfile::Kind::ramp;
      profile.coefficient =
          parse_double(tokens[pos + 2], "ramp coefficient at " + tokens[pos]);
      profile.exponent =
          parse_int(tokens[pos + 3], "ramp exponent at " + tokens[pos]);
      if (profile.exponent < 1)
        throw network_error("ramp exponent must be at least 1 at vertex '" +
                            tokens[pos] + "'");
      pos += 4;
    } else {
      throw network_error("unknown profile kind '" + kind + "' at vertex '" +
                          tokens[pos] + "'");
    }
    problem.boundary[v] = profile;
  }
  for (std::size_t v = 0; v < problem.boundary.size(); ++v)
    problem.boundary[v].horizon = problem.t_max;

  return problem;
}

NetworkProblem load_network_file(const std::string& path, double flow_tol) {
  std::ifstream in(path);
  if (!in) throw network_error("cannot open network file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return load_network(text.str(), flow_tol);
}

std::string serialize(const NetworkProblem& problem) {
  const NetworkTopology& t = *problem.topology;
  std::ostringstream out;
  out << "[vertices]\n";
  for (std::size_t v = 0; v < t.vertex_ids.size(); ++v)
    out << t.vertex_ids[v] << (v + 1 == t.vertex_ids.size() ? "\n" : " ");
  out << "\n[edges]\n";
  for (const Edge& e : t.edges)
    out << e.id << ' ' << t.vertex_ids[e.tail] << ' ' << t.vertex_ids[e.head]
        << ' ' << format_double(e.length) << ' ' << format_double(e.velocity)
        << '\n';
  out << "\n[boundary]\n";
  for (std::size_t v = 0; v < t.vertex_ids.size(); ++v) {
    if (!t.is_boundary(static_cast<int>(v))) continue;
    const TimeProfile& p = problem.boundary[v];
    if (p.kind == TimeProfile::Kind::zero)
      out << t.vertex_ids[v] << " zero\n";
    else
      out << t.vertex_ids[v] << " ramp " << format_double(p.coefficient) << ' '
          << p.exponent << '\n';
  }
  out << "\n[horizon]\n" << format_double(problem.t_max) << '\n';
  return out.str();
}

namespace {

const std::string kSinglePipe = R"(# one pipe of unit length and unit velocity
[vertices]
v1 v2

[edges]
# id tail head length velocity
e1 v1 v2 1 1

[boundary]
v1 ramp 9 3
v2 zero

[horizon]
3
)";

const std::string kGaslib11 = R"(# 11-pipe test network
[vertices]
v1 v2 v3 v4 v5 v6 v7 v8 v9 v10 v11

[edges]
# id tail head length velocity
e1 v1 v2 1 2
e2 v2 v3 1 2
e3 v5 v3 1 1
e4 v3 v6 1 3
e5 v5 v4 1 2
e6 v6 v7 1 2
e7 v8 v5 1 3
e8 v6 v8 1 1
e9 v9 v8 1 2
e10 v10 v9 1 1
e11 v11 v9 1 1

[boundary]
v1 ramp 2 3
v4 zero
v7 zero
v10 ramp 1.5 4
v11 ramp 2.5 3

[horizon]
6
)";

} // namespace

const std::string& fixture_document(const std::string& name) {
  if (name == "single_pipe") return kSinglePipe;
  if (name == "gaslib11") return kGaslib11;
  throw network_error("unknown fixture '" + name +
                      "' (available: single_pipe, gaslib11)");
}

NetworkProblem load_fixture(const std::string& name) {
  return load_network(fixture_document(name));
}

std::optional<std::string> compatibility_warning(const NetworkProblem& problem,
                                                 int k) {
  int m = problem.compatibility_order();
  if (m >= k) return std::nullopt;
  std::ostringstream msg;
  msg << "boundary data vanishes only to order " << m << " at t = 0; order "
      << k << " elements may lose accuracy near the start";
  return msg.str();
}

} // namespace pipedg
