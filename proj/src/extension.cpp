#include "lamina/extension.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "lamina/error.hpp"

namespace lamina {

std::string NormalForm::to_string() const {
  return "t^" + std::to_string(t_exp) + "." + tail.to_string();
}

std::string GLetter::to_string() const {
  if (is_stable()) {
    return t_sign_ > 0 ? "t" : "T";
  }
  return std::string(1, letter_.to_char());
}

std::vector<GLetter> parse_gword(std::string_view text, int rank) {
  if (rank >= 20) {
    throw MalformedInput("text input for the extension reserves 't'; rank must be below 20");
  }
  std::vector<GLetter> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '1' || c == '*' || c == '.') {
      ++i;
      continue;
    }
    // take one letter plus an optional exponent and reuse the word grammar
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '^') {
      ++j;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) {
        ++j;
      }
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
    }
    const std::string_view token = text.substr(i, j - i);
    if (c == 't' || c == 'T') {
      long exponent = 1;
      if (token.size() > 1) {
        exponent = std::stol(std::string(token.substr(2)));
      }
      if (c == 'T') {
        exponent = -exponent;
      }
      for (long k = 0; k < std::labs(exponent); ++k) {
        out.push_back(GLetter::stable(exponent < 0 ? -1 : 1));
      }
    } else {
      // letters are expanded without reduction so the raw word is preserved
      const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
      if (!std::isalpha(static_cast<unsigned char>(c))) {
        throw MalformedInput("unexpected character in G-word '" + std::string(text) + "'");
      }
      const int g = (upper ? c - 'A' : c - 'a') + 1;
      if (g > rank) {
        throw MalformedInput(std::string("generator '") + c + "' exceeds rank " +
                             std::to_string(rank));
      }
      long exponent = token.size() > 1 ? std::stol(std::string(token.substr(2))) : 1;
      const bool inverted = upper != (exponent < 0);
      for (long k = 0; k < std::labs(exponent); ++k) {
        out.push_back(GLetter::free(Letter(g, inverted)));
      }
    }
    i = j;
  }
  return out;
}

std::vector<GLetter> g_generators(int rank) {
  std::vector<GLetter> gens;
  for (int idx = 0; idx < 2 * rank; ++idx) {
    gens.push_back(GLetter::free(Letter::from_index(idx)));
  }
  gens.push_back(GLetter::stable(1));
  gens.push_back(GLetter::stable(-1));
  return gens;
}

NormalForm right_multiply(const NormalForm& x, GLetter s, const Automorphism& phi) {
  if (!s.is_stable()) {
    return {x.t_exp, x.tail * Word{s.letter()}};
  }
  if (s.t_sign() > 0) {
    return {x.t_exp + 1, iterate(phi, x.tail, -1)};
  }
  return {x.t_exp - 1, apply(phi, x.tail)};
}

NormalForm as_element(GLetter s) {
  if (s.is_stable()) {
    return {s.t_sign(), Word()};
  }
  return {0, Word{s.letter()}};
}

NormalForm normalize(std::span<const GLetter> raw, const Automorphism& phi) {
  NormalForm x;
  for (GLetter s : raw) {
    if (!s.is_stable() && s.letter().generator() > phi.rank()) {
      throw RankMismatch("G-word letter beyond the automorphism's rank");
    }
    x = right_multiply(x, s, phi);
  }
  return x;
}

NormalForm multiply(const NormalForm& x, const NormalForm& y, const Automorphism& phi) {
  // (t^k u)(t^m v) = t^(k+m) phi^-m(u) v
  return {x.t_exp + y.t_exp, iterate(phi, x.tail, -y.t_exp) * y.tail};
}

NormalForm inverse(const NormalForm& x, const Automorphism& phi) {
  // (t^k u)^-1 = t^-k phi^k(u^-1)
  return {-x.t_exp, iterate(phi, x.tail.inverse(), x.t_exp)};
}

namespace {

struct SearchSide {
  std::unordered_map<NormalForm, int> index;
  std::vector<NormalForm> nodes;
  std::vector<int> parent;
  std::size_t frontier_begin = 0;
  int radius = 0;

  explicit SearchSide(const NormalForm& root) {
    index.emplace(root, 0);
    nodes.push_back(root);
    parent.push_back(-1);
  }
  std::size_t frontier_size() const { return nodes.size() - frontier_begin; }

  // Expands one level and returns the index of the first new node.
  std::size_t expand(const Automorphism& phi, const std::vector<GLetter>& gens) {
    const std::size_t end = nodes.size();
    for (std::size_t i = frontier_begin; i < end; ++i) {
      for (GLetter s : gens) {
        NormalForm y = right_multiply(nodes[i], s, phi);
        if (index.try_emplace(y, static_cast<int>(nodes.size())).second) {
          nodes.push_back(std::move(y));
          parent.push_back(static_cast<int>(i));
        }
      }
    }
    frontier_begin = end;
    ++radius;
    return end;
  }

  std::vector<NormalForm> trace(int node) const {
    std::vector<NormalForm> out;
    for (int i = node; i >= 0; i = parent[i]) {
      out.push_back(nodes[i]);
    }
    return out;
  }

  int depth(int node) const {
    int d = 0;
    for (int i = parent[node]; i >= 0; i = parent[i]) {
      ++d;
    }
    return d;
  }
};

struct SearchResult {
  std::optional<int> distance;
  std::vector<NormalForm> path;  // from -> to
  int lower_bound = 0;
};

SearchResult bidirectional(const NormalForm& from, const NormalForm& to, const Automorphism& phi,
                           int max_radius, std::size_t max_states) {
  if (from == to) {
    return {0, {from}, 0};
  }
  const auto gens = g_generators(phi.rank());
  SearchSide forward(from);
  SearchSide backward(to);
  while (forward.radius + backward.radius < max_radius) {
    const bool grow_forward = forward.frontier_size() <= backward.frontier_size();
    SearchSide& side = grow_forward ? forward : backward;
    SearchSide& other = grow_forward ? backward : forward;
    const std::size_t first_new = side.expand(phi, gens);
    for (std::size_t i = first_new; i < side.nodes.size(); ++i) {
      auto hit = other.index.find(side.nodes[i]);
      if (hit == other.index.end()) {
        continue;
      }
      // all meetings at this stage have the same length; take the first
      auto a = side.trace(static_cast<int>(i));      // meet -> side root
      auto b = other.trace(hit->second);             // meet -> other root
      std::vector<NormalForm> path;
      if (grow_forward) {
        path.assign(a.rbegin(), a.rend());
        path.insert(path.end(), b.begin() + 1, b.end());
      } else {
        path.assign(b.rbegin(), b.rend());
        path.insert(path.end(), a.begin() + 1, a.end());
      }
      const int d = static_cast<int>(path.size()) - 1;
      return {d, std::move(path), d};
    }
    if (forward.nodes.size() + backward.nodes.size() > max_states) {
      return {std::nullopt, {}, forward.radius + backward.radius + 1};
    }
  }
  return {std::nullopt, {}, max_radius + 1};
}

}  // namespace

GLength g_length(const NormalForm& x, const Automorphism& phi, int max_radius,
                 std::size_t max_states) {
  auto r = bidirectional(NormalForm::identity(), x, phi, max_radius, max_states);
  return {r.distance, r.lower_bound};
}

GeodesicRealization geodesic_realization(const Word& lambda, const Automorphism& phi,
                                         int max_radius, std::size_t max_states) {
  const Word mid = lambda.prefix(lambda.size() / 2);
  GeodesicRealization out;
  out.start = {0, mid.inverse()};
  out.end = {0, mid.inverse() * lambda};
  auto r = bidirectional(out.start, out.end, phi, max_radius, max_states);
  if (!r.distance) {
    return out;
  }
  out.length = r.distance;
  out.path = std::move(r.path);
  for (const NormalForm& v : out.path) {
    const GLength d = g_length(v, phi, max_radius, max_states);
    if (d.value && (!out.min_dist || *d.value < *out.min_dist)) {
      out.min_dist = d.value;
    }
  }
  return out;
}

WitnessRecord witness_distortion(const Automorphism& phi, int n, int max_radius) {
  WitnessRecord rec;
  rec.n = n;
  const Word a = Word::generator(1);
  const Word image = iterate(phi, a, n);
  rec.h_length = image.size();
  rec.g_bound = 2 * n + 1;
  std::vector<GLetter> raw(n, GLetter::stable(1));
  raw.push_back(GLetter::free(Letter(1, false)));
  raw.insert(raw.end(), n, GLetter::stable(-1));
  const NormalForm x = normalize(raw, phi);
  rec.certified = x.t_exp == 0 && x.tail == image;
  if (max_radius > 0) {
    rec.g_exact = g_length(x, phi, max_radius).value;
  }
  return rec;
}

IntrinsicMetric::IntrinsicMetric(std::vector<Word> generators, int rank, std::size_t max_states)
    : rank_(rank), max_states_(max_states) {
  for (Word& g : generators) {
    if (g.max_generator() > rank) {
      throw RankMismatch("subgroup generator " + g.to_string() + " exceeds rank");
    }
    if (!g.empty()) {
      generators_.push_back(std::move(g));
    }
  }
  // wedge of loops, one per generator, checked for foldedness
  wedge_folded_ = !generators_.empty();
  wedge_.assign(1, std::vector<int>(2 * rank_, -1));
  auto link = [&](int u, Letter x, int v) {
    int& fwd = wedge_[u][x.index()];
    int& bwd = wedge_[v][x.inverse().index()];
    if (fwd >= 0 || bwd >= 0) {
      wedge_folded_ = false;
    }
    fwd = v;
    bwd = u;
  };
  for (const Word& g : generators_) {
    int current = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      int next = 0;
      if (i + 1 < g.size()) {
        next = static_cast<int>(wedge_.size());
        wedge_.emplace_back(2 * rank_, -1);
      }
      link(current, g[i], next);
      current = next;
    }
  }
  core_.emplace(CoreGraph::fold(generators_, rank_));
  seen_.emplace(Word(), 0);
  frontier_.push_back(Word());
}

std::optional<std::size_t> IntrinsicMetric::length(const Word& u) {
  if (!wedge_folded_) {
    return search_length(u);
  }
  int v = 0;
  std::size_t returns = 0;
  for (Letter x : u) {
    if (x.generator() > rank_) {
      return std::nullopt;
    }
    v = wedge_[v][x.index()];
    if (v < 0) {
      return std::nullopt;
    }
    returns += v == 0;
  }
  if (v != 0) {
    return std::nullopt;
  }
  return returns;
}

std::optional<std::size_t> IntrinsicMetric::search_length(const Word& u) {
  if (u.max_generator() > rank_ || !membership(*core_, u)) {
    return std::nullopt;
  }
  std::vector<Word> steps;
  for (const Word& g : generators_) {
    steps.push_back(g);
    steps.push_back(g.inverse());
  }
  while (true) {
    if (auto it = seen_.find(u); it != seen_.end()) {
      return it->second;
    }
    if (exhausted_ || seen_.size() >= max_states_) {
      return std::nullopt;
    }
    std::vector<Word> next;
    for (const Word& w : frontier_) {
      for (const Word& s : steps) {
        Word y = w * s;
        if (seen_.try_emplace(y, depth_ + 1).second) {
          next.push_back(std::move(y));
        }
      }
    }
    ++depth_;
    exhausted_ = next.empty();
    frontier_ = std::move(next);
  }
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  fit.samples = n;
  if (n == 0) {
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (denom != 0.0) {
    fit.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
  }
  fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.relative_residual = syy > 0 ? std::sqrt(ss / syy) : 0.0;
  return fit;
}

}  // namespace lamina
