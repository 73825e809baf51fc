#include "lrw/graph.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <queue>
#include <sstream>

#include "lrw/errors.hpp"

namespace lrw {

namespace {

bool is_connected(const std::vector<std::vector<Node>>& adj) {
  if (adj.empty()) return false;
  std::vector<char> seen(adj.size(), 0);
  std::queue<Node> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    Node u = q.front();
    q.pop();
    for (Node v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == adj.size();
}

std::vector<std::vector<Node>> from_edges(int n, const std::vector<std::pair<Node, Node>>& edges) {
  std::vector<std::vector<Node>> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return adj;
}

}  // namespace

Graph::Graph(std::vector<std::vector<Node>> adjacency, Family family, int grid_side)
    : adj_(std::move(adjacency)), family_(family), grid_side_(grid_side) {
  const int n = size();
  if (n < 1) throw InvalidArgument("graph must have at least one node");
  for (int u = 0; u < n; ++u) {
    auto& nb = adj_[static_cast<std::size_t>(u)];
    std::sort(nb.begin(), nb.end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      Node v = nb[i];
      if (v < 0 || v >= n) throw InvalidArgument("neighbor out of range at node " + std::to_string(u));
      if (v == u) throw InvalidArgument("self-loop at node " + std::to_string(u));
      if (i > 0 && nb[i - 1] == v) {
        throw InvalidArgument("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
      }
    }
  }
  for (int u = 0; u < n; ++u) {
    for (Node v : adj_[static_cast<std::size_t>(u)]) {
      const auto& back = adj_[static_cast<std::size_t>(v)];
      if (!std::binary_search(back.begin(), back.end(), u)) {
        throw InvalidArgument("asymmetric adjacency between " + std::to_string(u) + " and " + std::to_string(v));
      }
    }
  }
  if (!is_connected(adj_)) throw InvalidArgument("graph is disconnected");
}

bool Graph::adjacent(Node u, Node v) const {
  const auto& nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& nb : adj_) twice += nb.size();
  return twice / 2;
}

std::vector<std::pair<Node, Node>> Graph::edges() const {
  std::vector<std::pair<Node, Node>> out;
  for (int u = 0; u < size(); ++u) {
    for (Node v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::string Graph::family_name() const {
  switch (family_) {
    case Family::line: return "line";
    case Family::cycle: return "cycle";
    case Family::grid: return "grid";
    case Family::complete: return "complete";
    case Family::custom: return "custom";
  }
  return "custom";
}

std::pair<int, int> Graph::grid_label(Node v) const {
  if (family_ != Family::grid) throw InvalidArgument("grid_label on a non-grid graph");
  return {v / grid_side_ + 1, v % grid_side_ + 1};
}

Node Graph::grid_node(int row, int col) const {
  if (family_ != Family::grid) throw InvalidArgument("grid_node on a non-grid graph");
  if (row < 1 || row > grid_side_ || col < 1 || col > grid_side_) {
    throw InvalidArgument("grid label out of range");
  }
  return (row - 1) * grid_side_ + (col - 1);
}

Graph build_line(int n) {
  if (n < 2) throw InvalidArgument("line needs n >= 2, got " + std::to_string(n));
  std::vector<std::pair<Node, Node>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(from_edges(n, e), Graph::Family::line);
}

Graph build_cycle(int n) {
  if (n < 3) throw InvalidArgument("cycle needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<Node, Node>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(0, n - 1);
  return Graph(from_edges(n, e), Graph::Family::cycle);
}

Graph build_grid(int k) {
  if (k < 2) throw InvalidArgument("grid needs k >= 2, got " + std::to_string(k));
  std::vector<std::pair<Node, Node>> e;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      Node v = r * k + c;
      if (c + 1 < k) e.emplace_back(v, v + 1);
      if (r + 1 < k) e.emplace_back(v, v + k);
    }
  }
  return Graph(from_edges(k * k, e), Graph::Family::grid, k);
}

Graph build_complete(int n) {
  if (n < 2) throw InvalidArgument("complete graph needs n >= 2, got " + std::to_string(n));
  std::vector<std::pair<Node, Node>> e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return Graph(from_edges(n, e), Graph::Family::complete);
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  int n = -1;
  std::vector<std::pair<Node, Node>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    if (n < 0) {
      long long count = 0;
      std::string extra;
      if (!(fields >> count) || (fields >> extra)) throw ParseError(lineno, "expected node count");
      if (count < 1 || count > INT_MAX) throw ParseError(lineno, "node count out of range");
      n = static_cast<int>(count);
      continue;
    }
    long long u = 0, v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) throw ParseError(lineno, "expected \"u v\"");
    if (u == v) throw ParseError(lineno, "self-loop at node " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "node index out of range");
    if (u > v) throw ParseError(lineno, "edge must be written with u < v");
    edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
  }
  if (n < 0) throw ParseError(lineno, "missing node count");

  std::vector<std::pair<Node, Node>> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw InvalidArgument("duplicate edge " + std::to_string(dup->first) + "-" + std::to_string(dup->second));
  }
  auto adj = from_edges(n, edges);
  if (!is_connected(adj)) throw InvalidArgument("graph is disconnected");
  return Graph(std::move(adj), Graph::Family::custom);
}

DistanceMatrix::DistanceMatrix(const Graph& g) : n_(g.size()), dist_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1) {
  std::vector<Node> frontier;
  frontier.reserve(static_cast<std::size_t>(n_));
  for (Node s = 0; s < n_; ++s) {
    int* row = dist_.data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(n_);
    row[s] = 0;
    frontier.assign(1, s);
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      Node u = frontier[head];
      for (Node v : g.neighbors(u)) {
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          frontier.push_back(v);
        }
      }
    }
  }
}

int DistanceMatrix::diameter() const noexcept { return *std::max_element(dist_.begin(), dist_.end()); }

DistanceMatrix all_pairs_distance(const Graph& g) { return DistanceMatrix(g); }

int min_pairwise_distance(const DistanceMatrix& dist, const std::vector<Node>& positions) {
  int best = INT_MAX;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      best = std::min(best, dist(positions[i], positions[j]));
    }
  }
  return best;
}

namespace {

bool extend(const DistanceMatrix& dist, const std::vector<Node>& order, std::size_t from, int D, int need,
            std::vector<Node>& chosen) {
  if (need == 0) return true;
  for (std::size_t i = from; i < order.size(); ++i) {
    if (order.size() - i < static_cast<std::size_t>(need)) return false;
    Node v = order[i];
    bool ok = std::all_of(chosen.begin(), chosen.end(), [&](Node u) { return dist(u, v) >= D; });
    if (!ok) continue;
    chosen.push_back(v);
    if (extend(dist, order, i + 1, D, need - 1, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

bool distancing_feasible(const Graph& g, const DistanceMatrix& dist, int D, int m) {
  if (D < 1) throw InvalidArgument("D must be >= 1");
  if (m < 1) throw InvalidArgument("agent count must be >= 1");
  if (m > g.size()) return false;
  if (m == 1) return true;
  std::vector<Node> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Node a, Node b) { return g.degree(a) < g.degree(b); });
  std::vector<Node> chosen;
  return extend(dist, order, 0, D, m, chosen);
}

bool distancing_feasible(const Graph& g, int D, int m) { return distancing_feasible(g, DistanceMatrix(g), D, m); }

}  // namespace lrw
