#include "nilgraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace nilgraph {

DirectedGraph::DirectedGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 1) throw GraphError("graph needs at least one vertex");
  if (edges_.empty()) throw GraphError("graph needs at least one edge");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.source < 0 || e.source >= vertex_count_ || e.target < 0 || e.target >= vertex_count_)
      throw GraphError("edge " + std::to_string(e.source + 1) + " " + std::to_string(e.target + 1) +
                       ": vertex index out of range");
    if (e.source == e.target)
      throw GraphError("self-loop at vertex " + std::to_string(e.source + 1));
    auto key = std::minmax(e.source, e.target);
    if (!seen.insert({key.first, key.second}).second)
      throw GraphError("duplicate edge between vertices " + std::to_string(key.first + 1) + " and " +
                       std::to_string(key.second + 1));
  }
}

std::optional<int> DirectedGraph::edge_between(int a, int b) const {
  for (int k = 0; k < edge_count(); ++k) {
    const auto& e = edges_[k];
    if ((e.source == a && e.target == b) || (e.source == b && e.target == a)) return k;
  }
  return std::nullopt;
}

DirectedGraph DirectedGraph::reversed() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({e.target, e.source});
  return {vertex_count_, std::move(out)};
}

DirectedGraph DirectedGraph::relabeled(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != vertex_count_) throw GraphError("permutation size mismatch");
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({perm[e.source], perm[e.target]});
  return {vertex_count_, std::move(out)};
}

std::string DirectedGraph::serialize() const {
  std::ostringstream os;
  os << "vertices " << vertex_count_ << '\n';
  for (const auto& e : edges_) os << "edge " << e.source + 1 << ' ' << e.target + 1 << '\n';
  return os.str();
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& s, int line_no) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size())
    throw GraphError("line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
  return value;
}

}  // namespace

DirectedGraph parse_graph(std::string_view text) {
  std::optional<int> vertices;
  std::vector<Edge> edges;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (!vertices) {
      if (tok.size() != 2 || tok[0] != "vertices")
        throw GraphError("line " + std::to_string(line_no) + ": expected 'vertices <n>'");
      int n = parse_int(tok[1], line_no);
      if (n < 1) throw GraphError("line " + std::to_string(line_no) + ": vertex count must be positive");
      vertices = n;
      continue;
    }
    if (tok.size() != 3 || tok[0] != "edge")
      throw GraphError("line " + std::to_string(line_no) + ": expected 'edge <i> <j>'");
    edges.push_back({parse_int(tok[1], line_no) - 1, parse_int(tok[2], line_no) - 1});
  }
  if (!vertices) throw GraphError("missing 'vertices <n>' line");
  if (edges.empty()) throw GraphError("graph needs at least one edge");
  return DirectedGraph(*vertices, std::move(edges));
}

DirectedGraph generate_named(std::string_view name, int n) {
  auto too_small = [&](int min) {
    if (n < min)
      throw GraphError(std::string(name) + ": parameter must be at least " + std::to_string(min));
  };
  std::vector<Edge> e;
  if (name == "K") {
    too_small(2);
    if (n == 3) return DirectedGraph(3, {{0, 1}, {1, 2}, {2, 0}});
    if (n == 4) return DirectedGraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}, {2, 0}});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return DirectedGraph(n, std::move(e));
  }
  if (name == "S") {
    // Hub is vertex 0 (V_0); edge Z_i runs V_0 -> V_i.
    too_small(1);
    for (int i = 1; i <= n; ++i) e.push_back({0, i});
    return DirectedGraph(n + 1, std::move(e));
  }
  if (name == "P") {
    too_small(2);
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return DirectedGraph(n, std::move(e));
  }
  if (name == "C") {
    too_small(3);
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return DirectedGraph(n, std::move(e));
  }
  if (name == "G1") return DirectedGraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}});
  if (name == "G2") return DirectedGraph(4, {{0, 1}, {3, 0}, {1, 3}, {2, 0}});
  throw GraphError("unknown graph family '" + std::string(name) + "'");
}

DirectedGraph generate_named(std::string_view spec) {
  if (spec == "G1" || spec == "G2") return generate_named(spec, 4);
  if (spec.size() < 2 || !std::isalpha(static_cast<unsigned char>(spec[0])))
    throw GraphError("malformed graph name '" + std::string(spec) + "'");
  std::string digits(spec.substr(1));
  if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw GraphError("malformed graph name '" + std::string(spec) + "'");
  return generate_named(spec.substr(0, 1), std::stoi(digits));
}

std::optional<std::string> recognize_named(const DirectedGraph& g) {
  auto try_family = [&](const char* fam, int lo, int hi) -> std::optional<std::string> {
    for (int n = lo; n <= hi; ++n)
      if (generate_named(fam, n) == g) return std::string(fam) + std::to_string(n);
    return std::nullopt;
  };
  if (auto r = try_family("K", 2, 8)) return r;
  if (auto r = try_family("S", 1, 7)) return r;
  if (auto r = try_family("P", 2, 8)) return r;
  if (auto r = try_family("C", 3, 8)) return r;
  if (generate_named("G1", 4) == g) return "G1";
  if (generate_named("G2", 4) == g) return "G2";
  return std::nullopt;
}

std::vector<std::vector<int>> connected_components(const DirectedGraph& g) {
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) parent[find(e.source)] = find(e.target);
  std::vector<std::vector<int>> out;
  std::vector<int> slot(g.vertex_count(), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    int root = find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[root]].push_back(v);
  }
  return out;
}

bool isomorphic(const DirectedGraph& a, const DirectedGraph& b) {
  const int n = a.vertex_count();
  if (n > 8 || b.vertex_count() > 8) throw GraphError("isomorphism test limited to 8 vertices");
  if (n != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<std::vector<bool>> adj_b(n, std::vector<bool>(n, false));
  for (const auto& e : b.edges()) adj_b[e.source][e.target] = adj_b[e.target][e.source] = true;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : a.edges())
      if (!adj_b[perm[e.source]][perm[e.target]]) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

DirectedGraph disjoint_union(const DirectedGraph& a, const DirectedGraph& b) {
  std::vector<Edge> e = a.edges();
  for (const auto& x : b.edges())
    e.push_back({x.source + a.vertex_count(), x.target + a.vertex_count()});
  return DirectedGraph(a.vertex_count() + b.vertex_count(), std::move(e));
}

}  // namespace nilgraph
