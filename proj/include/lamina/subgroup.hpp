#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lamina/traintrack.hpp"
#include "lamina/word.hpp"

namespace lamina {

// Stallings core graph of a finitely generated subgroup of the free group.
// Folded (at most one edge per label leaving and entering each vertex), core
// (every vertex other than the basepoint has degree >= 2) and connected.
// Vertices are numbered breadth-first from the basepoint 0, visiting letters
// in the order a, A, b, B, ...; equal subgroups therefore give equal graphs.
class CoreGraph {
 public:
  // Core graph of <generators>. Order and repetition of generators do not
  // matter.
  static CoreGraph fold(std::span<const Word> generators, int rank);
  static CoreGraph whole_group(int rank);

  int rank() const { return rank_; }
  int vertex_count() const { return vertices_; }
  // Number of (positively labeled) edges.
  int edge_count() const;
  int degree(int v) const;
  static constexpr int basepoint() { return 0; }

  // Endpoint of the edge leaving v with label x (x inverted = traverse a
  // positive edge backwards).
  std::optional<int> target(int v, Letter x) const {
    const std::int32_t t = next_[static_cast<std::size_t>(v) * 2 * rank_ + x.index()];
    return t < 0 ? std::nullopt : std::optional<int>(t);
  }

  // Free basis read off a breadth-first spanning tree.
  std::vector<Word> basis() const;
  // Rank of the subgroup, E - V + 1.
  int subgroup_rank() const { return edge_count() - vertex_count() + 1; }

  bool operator==(const CoreGraph&) const = default;
  std::string to_string() const;

 private:
  CoreGraph(int rank, int vertices, std::vector<std::int32_t> next)
      : rank_(rank), vertices_(vertices), next_(std::move(next)) {}
  // Folds, prunes and canonically relabels an edge list (u, generator, v)
  // around basepoint 0.
  static CoreGraph from_edges(int rank, int vertices,
                              std::vector<std::array<int, 3>> edges);

  friend CoreGraph fiber_product(const CoreGraph&, const CoreGraph&);

  int rank_ = 0;
  int vertices_ = 1;
  std::vector<std::int32_t> next_;  // vertex * 2 * rank + letter index -> vertex or -1
};

struct IndexReport {
  bool finite = false;
  int value = 0;  // meaningful when finite
  bool operator==(const IndexReport&) const = default;
};

bool membership(const CoreGraph& c, const Word& w);
IndexReport index(const CoreGraph& c);
// Core graph of h^-1 <c> h.
CoreGraph conjugate_core(const CoreGraph& c, const Word& h);
// Core graph of the intersection of the two subgroups.
CoreGraph fiber_product(const CoreGraph& c1, const CoreGraph& c2);

// p can be read as a label path starting at some vertex of c.
bool reads(const CoreGraph& c, const Word& p);
// Longest factor of w readable in c.
std::size_t longest_readable_factor(const CoreGraph& c, const Word& w);
// Longest factor of f^n_max(seed) readable in c; f must be a rose of
// matching rank.
std::size_t max_carried_length(const CoreGraph& c, const MarkedGraphMap& f, OrientedEdge seed,
                               int n_max);

// Index of (h ∩ k) in k, decided by checking whether the pullback of the two
// core graphs is a complete cover of k's core.
IndexReport relative_index(const CoreGraph& h, const CoreGraph& k);

}  // namespace lamina
