#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lamina/automorphism.hpp"
#include "lamina/word.hpp"

namespace lamina {

// Oriented edges reuse Letter: generator() is the 1-based edge index and
// inverted() marks the reversed orientation. An EdgePath is a reduced
// sequence of oriented edges; on a rose it is literally a word.
using OrientedEdge = Letter;
using EdgePath = Word;

struct GraphEdge {
  std::string name;
  int origin = 0;
  int terminus = 0;
};

// A self-map of a finite graph sending edges to nonempty edge paths.
class MarkedGraphMap {
 public:
  MarkedGraphMap(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges,
                 std::vector<EdgePath> edge_images, std::vector<int> vertex_images,
                 std::size_t length_cap = kDefaultLengthCap);

  // The map on the rose whose edges are the generators of phi.
  static MarkedGraphMap rose(const Automorphism& phi);

  // Text format (see docs/FORMATS.md):
  //
  //   vertices: v w          (omit for a rose with one vertex)
  //   edge a: v -> v         (omit on a rose; edges come from image lines)
  //   vertex w -> v
  //   a -> a b^-1
  static MarkedGraphMap parse(std::string_view text, std::size_t length_cap = kDefaultLengthCap);

  int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const GraphEdge& edge(int index) const { return edges_[index - 1]; }
  const std::string& vertex_name(int v) const { return vertex_names_[v]; }
  int origin(OrientedEdge e) const;
  int terminus(OrientedEdge e) const;
  int vertex_image(int v) const { return vertex_images_[v]; }
  // f(e) for an oriented edge; reversed edges map to the reversed path.
  EdgePath image(OrientedEdge e) const;
  std::size_t length_cap() const { return cap_; }

  bool is_rose() const { return vertex_count() == 1; }
  // Every image uses only positively oriented edges.
  bool is_positive() const;
  // Rank of the fundamental group, E - V + 1.
  int rank() const { return edge_count() - vertex_count() + 1; }

  std::optional<int> edge_by_name(std::string_view name) const;
  EdgePath parse_path(std::string_view text) const;
  std::string path_to_string(const EdgePath& p) const;

  // Reads an edge path as an element of the free group. Roses use the
  // identity marking; other graphs collapse the spanning tree built from the
  // lowest-index edges and number the remaining edges in order.
  Word to_word(const EdgePath& p) const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<GraphEdge> edges_;
  std::vector<EdgePath> images_;
  std::vector<int> vertex_images_;
  std::size_t cap_;
  std::vector<int> tree_generator_;  // edge -> generator (0 for tree edges)
};

// Applies f to a path. Throws NotATrainTrack if the images cancel at a seam.
EdgePath apply_map(const MarkedGraphMap& f, const EdgePath& p);

// Iterated images stay reduced for k <= max_iterations. Positive maps pass
// without iterating.
bool check_train_track(const MarkedGraphMap& f, int max_iterations = 8);

// Nonnegative integer matrix indexed by unoriented edges. Columns are source
// edges and rows count crossings: entry (i, j) = occurrences of edge i (either
// direction) in f(e_j).
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0) {}
  TransitionMatrix(int n, std::vector<std::int64_t> row_major);
  static TransitionMatrix identity(int n);

  int dimension() const { return n_; }
  std::int64_t& at(int row, int col) { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  std::int64_t at(int row, int col) const { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  std::int64_t column_sum(int col) const;
  bool strictly_positive() const;

  // Throws Error on int64 overflow.
  friend TransitionMatrix operator*(const TransitionMatrix& x, const TransitionMatrix& y);
  TransitionMatrix power(int k) const;
  bool operator==(const TransitionMatrix&) const = default;
  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<std::int64_t> data_;
};

TransitionMatrix transition_matrix(const MarkedGraphMap& f);

struct Primitivity {
  bool primitive = false;
  // Least k with M^k > 0 entrywise.
  std::optional<int> witness_power;
};

// Searches k <= (n-1)^2 + 1 using boolean powers.
Primitivity is_primitive(const TransitionMatrix& m);

struct PerronFrobenius {
  double eigenvalue = 0.0;
  std::vector<double> eigenvector;  // positive, sums to 1
  int iterations = 0;
};

// Power iteration; stops when successive Rayleigh quotients differ by less
// than tolerance. Throws HypothesisViolation for non-primitive input.
PerronFrobenius pf_data(const TransitionMatrix& m, double tolerance = 1e-9,
                        int max_iterations = 10'000);

// f^n(e). Its length is checked against the column sum of M^n.
EdgePath leaf_segment(const MarkedGraphMap& f, OrientedEdge e, int n);

// An oriented edge e at base_vertex with f^period(e) beginning with e.
struct EigenRay {
  int base_vertex = 0;
  OrientedEdge direction;
  int period = 1;
  bool operator==(const EigenRay&) const = default;
};

std::vector<EigenRay> periodic_directions(const MarkedGraphMap& f);

struct EigenRayPrefix {
  EdgePath path;
  // The ray stopped growing (e.g. under a non-expanding map); path is the
  // whole eventually constant ray and may be shorter than requested.
  bool degenerate = false;
};

EigenRayPrefix eigenray_prefix(const MarkedGraphMap& f, const EigenRay& ray, std::size_t length);

struct DiagonalPair {
  EigenRay first;
  EigenRay second;
  int common_period = 1;
};

struct DiagonalPairs {
  std::vector<DiagonalPair> pairs;
  // Some direction does not expand; the pairs come from a degenerate map.
  bool degenerate = false;
};

DiagonalPairs diagonal_pairs(const MarkedGraphMap& f);

struct LeafLanguage {
  // Length-L factors of f^n_max(e) over all edges, with their reverses.
  std::set<EdgePath> factors;
  // Least n whose factor set already equals the one at n_max.
  int stabilized_at = 0;
  // stabilized_at < n_max, i.e. the set was seen to repeat.
  bool stable = false;
};

LeafLanguage leaf_language(const MarkedGraphMap& f, std::size_t length, int n_max);
// Single-threaded reference used by the tests and benchmark.
LeafLanguage leaf_language_serial(const MarkedGraphMap& f, std::size_t length, int n_max);

}  // namespace lamina
