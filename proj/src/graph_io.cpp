#include "spectail/graph_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "spectail/errors.hpp"

namespace spectail::io {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    return true;
  }
  return false;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) throw DomainError("edge list: missing 'n m' header");
  long long n = -1, m = -1;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 0 || m < 0) throw DomainError("edge list: malformed header '" + line + "'");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_content_line(in, line, lineno)) {
      throw DomainError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    }
    std::istringstream es(line);
    Edge e;
    if (!(es >> e.u >> e.v >> e.w)) throw DomainError("edge list line " + std::to_string(lineno) + ": malformed edge");
    edges.push_back(e);
  }
  if (next_content_line(in, line, lineno)) throw DomainError("edge list: trailing content at line " + std::to_string(lineno));
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  out << std::setprecision(17);
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

nlohmann::json to_json(const WeightedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.w});
  return {{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

WeightedGraph from_json(const nlohmann::json& j) {
  try {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    return WeightedGraph(j.at("n").get<int>(), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("graph JSON: ") + ex.what());
  }
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open graph file " + path);
  if (ends_with(path, ".json")) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw DomainError("graph JSON " + path + ": " + ex.what());
    }
    return from_json(j);
  }
  return read_edge_list(in);
}

void save_graph(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write graph file " + path);
  if (ends_with(path, ".json")) {
    out << to_json(g).dump() << '\n';
  } else {
    write_edge_list(out, g);
  }
}

}  // namespace spectail::io
