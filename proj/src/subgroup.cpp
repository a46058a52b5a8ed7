#include "lamina/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "lamina/error.hpp"

namespace lamina {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Keeps the smaller representative so the basepoint stays 0.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      return false;
    }
    if (b < a) {
      std::swap(a, b);
    }
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

CoreGraph CoreGraph::from_edges(int rank, int vertices, std::vector<std::array<int, 3>> edges) {
  // fold to a fixpoint
  UnionFind uf(vertices);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> out;
    std::map<std::pair<int, int>, int> in;
    for (const auto& [u0, g, v0] : edges) {
      const int u = uf.find(u0);
      const int v = uf.find(v0);
      auto [ot, onew] = out.try_emplace({u, g}, v);
      if (!onew && uf.find(ot->second) != v) {
        changed |= uf.unite(ot->second, v);
      }
      auto [it, inew] = in.try_emplace({uf.find(v), g}, uf.find(u));
      if (!inew && uf.find(it->second) != uf.find(u)) {
        changed |= uf.unite(it->second, u);
      }
    }
  }
  std::vector<std::array<int, 3>> folded;
  for (const auto& [u, g, v] : edges) {
    folded.push_back({uf.find(u), g, uf.find(v)});
  }
  std::sort(folded.begin(), folded.end());
  folded.erase(std::unique(folded.begin(), folded.end()), folded.end());

  // prune hanging trees away from the basepoint
  std::vector<int> degree(vertices, 0);
  for (const auto& [u, g, v] : folded) {
    ++degree[u];
    ++degree[v];
  }
  std::vector<bool> alive_edge(folded.size(), true);
  std::deque<int> queue;
  for (int v = 1; v < vertices; ++v) {
    if (uf.find(v) == v && degree[v] == 1) {
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (degree[v] != 1) {
      continue;
    }
    for (std::size_t i = 0; i < folded.size(); ++i) {
      if (!alive_edge[i] || (folded[i][0] != v && folded[i][2] != v)) {
        continue;
      }
      alive_edge[i] = false;
      const int other = folded[i][0] == v ? folded[i][2] : folded[i][0];
      --degree[v];
      --degree[other];
      if (other != 0 && degree[other] == 1) {
        queue.push_back(other);
      }
      break;
    }
  }

  // adjacency on old labels
  std::map<int, std::vector<std::pair<int, int>>> adjacency;  // vertex -> (letter index, vertex)
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if (!alive_edge[i]) {
      continue;
    }
    const auto& [u, g, v] = folded[i];
    adjacency[u].push_back({Letter(g, false).index(), v});
    adjacency[v].push_back({Letter(g, true).index(), u});
  }
  // canonical breadth-first relabeling
  std::map<int, int> label{{0, 0}};
  std::vector<int> order{0};
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto& nbrs = adjacency[order[head]];
    std::sort(nbrs.begin(), nbrs.end());
    for (const auto& [x, w] : nbrs) {
      if (label.try_emplace(w, static_cast<int>(order.size())).second) {
        order.push_back(w);
      }
    }
  }
  const int n = static_cast<int>(order.size());
  std::vector<std::int32_t> next(static_cast<std::size_t>(n) * 2 * rank, -1);
  for (int i = 0; i < n; ++i) {
    for (const auto& [x, w] : adjacency[order[i]]) {
      next[static_cast<std::size_t>(i) * 2 * rank + x] = label.at(w);
    }
  }
  return CoreGraph(rank, n, std::move(next));
}

CoreGraph CoreGraph::fold(std::span<const Word> generators, int rank) {
  if (rank < 1 || rank > kMaxRank) {
    throw RankMismatch("subgroup rank must lie in 1.." + std::to_string(kMaxRank));
  }
  int vertices = 1;
  std::vector<std::array<int, 3>> edges;
  for (const Word& w : generators) {
    if (w.max_generator() > rank) {
      throw RankMismatch("generator " + w.to_string() + " exceeds rank " + std::to_string(rank));
    }
    int current = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const int next = (i + 1 == w.size()) ? 0 : vertices++;
      const Letter x = w[i];
      if (x.inverted()) {
        edges.push_back({next, x.generator(), current});
      } else {
        edges.push_back({current, x.generator(), next});
      }
      current = next;
    }
  }
  return from_edges(rank, vertices, std::move(edges));
}

CoreGraph CoreGraph::whole_group(int rank) {
  std::vector<Word> gens;
  for (int g = 1; g <= rank; ++g) {
    gens.push_back(Word::generator(g));
  }
  return fold(gens, rank);
}

int CoreGraph::edge_count() const {
  int e = 0;
  for (int v = 0; v < vertices_; ++v) {
    for (int g = 1; g <= rank_; ++g) {
      e += target(v, Letter(g, false)).has_value();
    }
  }
  return e;
}

int CoreGraph::degree(int v) const {
  int d = 0;
  for (int x = 0; x < 2 * rank_; ++x) {
    d += next_[static_cast<std::size_t>(v) * 2 * rank_ + x] >= 0;
  }
  return d;
}

std::vector<Word> CoreGraph::basis() const {
  // tree paths from the basepoint, breadth-first in letter order
  std::vector<std::optional<Word>> path(vertices_);
  std::vector<std::vector<bool>> tree(vertices_, std::vector<bool>(2 * rank_, false));
  path[0] = Word();
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int x = 0; x < 2 * rank_; ++x) {
      const Letter l = Letter::from_index(x);
      if (auto w = target(v, l); w && !path[*w]) {
        path[*w] = *path[v] * Word{l};
        tree[v][x] = true;
        tree[*w][l.inverse().index()] = true;
        queue.push_back(*w);
      }
    }
  }
  std::vector<Word> out;
  for (int v = 0; v < vertices_; ++v) {
    for (int g = 1; g <= rank_; ++g) {
      const Letter l(g, false);
      if (auto w = target(v, l); w && !tree[v][l.index()]) {
        out.push_back(*path[v] * Word{l} * path[*w]->inverse());
      }
    }
  }
  return out;
}

std::string CoreGraph::to_string() const {
  std::string s = "core graph: " + std::to_string(vertices_) + " vertices, " +
                  std::to_string(edge_count()) + " edges\n";
  for (int v = 0; v < vertices_; ++v) {
    for (int g = 1; g <= rank_; ++g) {
      if (auto w = target(v, Letter(g, false))) {
        s += "  v" + std::to_string(v) + " -" + Letter(g, false).to_char() + "-> v" +
             std::to_string(*w) + "\n";
      }
    }
  }
  return s;
}

bool membership(const CoreGraph& c, const Word& w) {
  if (w.max_generator() > c.rank()) {
    return false;
  }
  int v = CoreGraph::basepoint();
  for (Letter x : w) {
    auto next = c.target(v, x);
    if (!next) {
      return false;
    }
    v = *next;
  }
  return v == CoreGraph::basepoint();
}

IndexReport index(const CoreGraph& c) {
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (c.degree(v) != 2 * c.rank()) {
      return {false, 0};
    }
  }
  return {true, c.vertex_count()};
}

CoreGraph conjugate_core(const CoreGraph& c, const Word& h) {
  std::vector<Word> gens;
  const Word hi = h.inverse();
  for (const Word& b : c.basis()) {
    gens.push_back(hi * b * h);
  }
  return CoreGraph::fold(gens, c.rank());
}

CoreGraph fiber_product(const CoreGraph& c1, const CoreGraph& c2) {
  if (c1.rank() != c2.rank()) {
    throw RankMismatch("fiber product of core graphs with different ranks");
  }
  const int rank = c1.rank();
  std::map<std::pair<int, int>, int> id{{{0, 0}, 0}};
  std::vector<std::pair<int, int>> order{{0, 0}};
  std::vector<std::array<int, 3>> edges;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto [u1, u2] = order[head];
    for (int g = 1; g <= rank; ++g) {
      const Letter x(g, false);
      auto v1 = c1.target(u1, x);
      auto v2 = c2.target(u2, x);
      if (!v1 || !v2) {
        continue;
      }
      auto [it, fresh] = id.try_emplace({*v1, *v2}, static_cast<int>(order.size()));
      if (fresh) {
        order.push_back({*v1, *v2});
      }
      edges.push_back({static_cast<int>(head), g, it->second});
    }
    for (int g = 1; g <= rank; ++g) {
      const Letter x(g, true);
      auto v1 = c1.target(u1, x);
      auto v2 = c2.target(u2, x);
      if (!v1 || !v2) {
        continue;
      }
      if (id.try_emplace({*v1, *v2}, static_cast<int>(order.size())).second) {
        order.push_back({*v1, *v2});
      }
    }
  }
  return CoreGraph::from_edges(rank, static_cast<int>(order.size()), std::move(edges));
}

bool reads(const CoreGraph& c, const Word& p) {
  if (p.max_generator() > c.rank()) {
    return false;
  }
  // the partial maps v -> v.x are injective, so simulating all start vertices
  // at once never grows the state set
  std::vector<int> states(c.vertex_count());
  std::iota(states.begin(), states.end(), 0);
  for (Letter x : p) {
    std::vector<int> next;
    for (int v : states) {
      if (auto w = c.target(v, x)) {
        next.push_back(*w);
      }
    }
    if (next.empty()) {
      return false;
    }
    states = std::move(next);
  }
  return true;
}

std::size_t longest_readable_factor(const CoreGraph& c, const Word& w) {
  // run[v] = longest readable prefix of w[i..] starting at v, right to left
  const int nv = c.vertex_count();
  std::vector<std::size_t> run(nv, 0);
  std::vector<std::size_t> next(nv, 0);
  std::size_t best = 0;
  for (std::size_t i = w.size(); i-- > 0;) {
    const Letter x = w[i];
    for (int v = 0; v < nv; ++v) {
      if (x.generator() > c.rank()) {
        next[v] = 0;
      } else if (auto t = c.target(v, x)) {
        next[v] = 1 + run[*t];
      } else {
        next[v] = 0;
      }
      best = std::max(best, next[v]);
    }
    std::swap(run, next);
  }
  return best;
}

std::size_t max_carried_length(const CoreGraph& c, const MarkedGraphMap& f, OrientedEdge seed,
                               int n_max) {
  if (!f.is_rose() || f.edge_count() != c.rank()) {
    throw RankMismatch("max_carried_length needs a rose map of the subgroup's ambient rank");
  }
  return longest_readable_factor(c, f.to_word(leaf_segment(f, seed, n_max)));
}

IndexReport relative_index(const CoreGraph& h, const CoreGraph& k) {
  if (h.rank() != k.rank()) {
    throw RankMismatch("relative index of core graphs with different ranks");
  }
  if (k.vertex_count() == 1 && k.edge_count() == 0) {
    return {true, 1};
  }
  // Move k's basepoint off its stem: with stem word s, k = s k0 s^-1 and
  // [k : h ∩ k] = [k0 : s^-1 h s ∩ k0].
  std::vector<Letter> stem;
  if (k.degree(CoreGraph::basepoint()) == 1) {
    int v = CoreGraph::basepoint();
    do {
      for (int x = 0; x < 2 * k.rank(); ++x) {
        const Letter l = Letter::from_index(x);
        if (k.target(v, l) && (stem.empty() || l != stem.back().inverse())) {
          stem.push_back(l);
          v = *k.target(v, l);
          break;
        }
      }
    } while (k.degree(v) == 2);
  }
  const Word s = Word::from_reduced(stem);
  const CoreGraph k0 = s.empty() ? k : conjugate_core(k, s);
  const CoreGraph h0 = s.empty() ? h : conjugate_core(h, s);

  // breadth-first pullback from the basepoints; a complete cover lifts every
  // edge of k0 at every visited pair
  std::map<std::pair<int, int>, int> seen{{{0, 0}, 0}};
  std::vector<std::pair<int, int>> order{{0, 0}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto [a, b] = order[head];
    for (int x = 0; x < 2 * k0.rank(); ++x) {
      const Letter l = Letter::from_index(x);
      auto tb = k0.target(b, l);
      if (!tb) {
        continue;
      }
      auto ta = h0.target(a, l);
      if (!ta) {
        return {false, 0};
      }
      if (seen.try_emplace({*ta, *tb}, static_cast<int>(order.size())).second) {
        order.push_back({*ta, *tb});
      }
    }
  }
  return {true, static_cast<int>(order.size()) / k0.vertex_count()};
}

}  // namespace lamina
