#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lrw {

using Node = int;

/// Undirected, unit-length, connected graph on nodes 0..n-1.
///
/// Adjacency lists are sorted and free of self-loops and duplicates. A Graph is
/// immutable once built; the builders and parse_edge_list are the only ways to
/// obtain one, and each rejects disconnected input.
class Graph {
 public:
  enum class Family { line, cycle, grid, complete, custom };

  Graph(std::vector<std::vector<Node>> adjacency, Family family, int grid_side = 0);

  int size() const noexcept { return static_cast<int>(adj_.size()); }
  const std::vector<Node>& neighbors(Node v) const { return adj_.at(static_cast<std::size_t>(v)); }
  int degree(Node v) const { return static_cast<int>(neighbors(v).size()); }
  bool adjacent(Node u, Node v) const;
  std::size_t edge_count() const noexcept;
  std::vector<std::pair<Node, Node>> edges() const;

  Family family() const noexcept { return family_; }
  std::string family_name() const;
  /// Side length k for GR_k grids, 0 otherwise.
  int grid_side() const noexcept { return grid_side_; }

  /// 1-indexed (row, col) label of a grid node, as in the usual k x k figure layout.
  std::pair<int, int> grid_label(Node v) const;
  Node grid_node(int row, int col) const;

 private:
  std::vector<std::vector<Node>> adj_;
  Family family_;
  int grid_side_;
};

Graph build_line(int n);
Graph build_cycle(int n);
Graph build_grid(int k);
Graph build_complete(int n);

/// Edge-list text: first non-comment line is the node count, then one "u v" pair per
/// line with 0 <= u < v < n. Lines starting with '#' are comments; CRLF is accepted.
Graph parse_edge_list(std::string_view text);

/// All-pairs hop distances.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const Graph& g);

  int size() const noexcept { return n_; }
  int operator()(Node u, Node v) const {
    return dist_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  }
  int diameter() const noexcept;

 private:
  int n_;
  std::vector<int> dist_;
};

DistanceMatrix all_pairs_distance(const Graph& g);

/// Smallest pairwise distance among the given positions (repeated nodes give 0).
/// Returns INT_MAX for fewer than two positions.
int min_pairwise_distance(const DistanceMatrix& dist, const std::vector<Node>& positions);

/// True iff some set of m nodes has pairwise distance >= D.
bool distancing_feasible(const Graph& g, int D, int m);
bool distancing_feasible(const Graph& g, const DistanceMatrix& dist, int D, int m);

}  // namespace lrw
