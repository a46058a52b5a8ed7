#include "lamina/traintrack.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "lamina/error.hpp"

namespace lamina {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) {
    out.push_back(tok);
  }
  return out;
}

// Tokenizes a path over the given edge names. Tokens are whitespace separated
// "name" or "name^-1"; when every name is a single letter, compact words such
// as "abA" are accepted too.
std::vector<Letter> tokenize_path(std::string_view text,
                                  const std::map<std::string, int, std::less<>>& by_name) {
  const bool single_letters = std::all_of(by_name.begin(), by_name.end(), [](const auto& kv) {
    return kv.first.size() == 1 && std::islower(static_cast<unsigned char>(kv.first[0]));
  });
  std::vector<Letter> raw;
  for (const std::string& tok : split_ws(text)) {
    std::string name = tok;
    bool inverted = false;
    if (name.size() > 3 && name.ends_with("^-1")) {
      name.resize(name.size() - 3);
      inverted = true;
    }
    if (auto it = by_name.find(name); it != by_name.end()) {
      raw.emplace_back(it->second, inverted);
      continue;
    }
    if (!single_letters) {
      throw MalformedInput("unknown edge '" + tok + "'");
    }
    // compact letters, reusing the word grammar letter by letter
    for (std::size_t i = 0; i < tok.size(); ++i) {
      const char c = tok[i];
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      auto it = by_name.find(std::string_view(&lower, 1));
      if (it == by_name.end()) {
        throw MalformedInput("unknown edge '" + std::string(1, c) + "' in '" + tok + "'");
      }
      bool inv = std::isupper(static_cast<unsigned char>(c)) != 0;
      if (i + 3 < tok.size() && tok.compare(i + 1, 3, "^-1") == 0) {
        inv = !inv;
        i += 3;
      }
      raw.emplace_back(it->second, inv);
    }
  }
  return raw;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

MarkedGraphMap::MarkedGraphMap(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges,
                               std::vector<EdgePath> edge_images, std::vector<int> vertex_images,
                               std::size_t length_cap)
    : vertex_names_(std::move(vertex_names)),
      edges_(std::move(edges)),
      images_(std::move(edge_images)),
      vertex_images_(std::move(vertex_images)),
      cap_(length_cap) {
  const int nv = vertex_count();
  const int ne = edge_count();
  if (nv == 0 || ne == 0) {
    throw MalformedInput("graph map needs at least one vertex and one edge");
  }
  if (static_cast<int>(images_.size()) != ne || static_cast<int>(vertex_images_.size()) != nv) {
    throw MalformedInput("graph map: image tables do not match the graph");
  }
  for (const auto& e : edges_) {
    if (e.origin < 0 || e.origin >= nv || e.terminus < 0 || e.terminus >= nv) {
      throw MalformedInput("edge '" + e.name + "' has an unknown endpoint");
    }
  }
  for (int v : vertex_images_) {
    if (v < 0 || v >= nv) {
      throw MalformedInput("vertex image out of range");
    }
  }
  for (int i = 1; i <= ne; ++i) {
    const EdgePath& img = images_[i - 1];
    if (img.empty()) {
      throw MalformedInput("edge '" + edges_[i - 1].name + "' has an empty image");
    }
    if (img.max_generator() > ne) {
      throw MalformedInput("image of '" + edges_[i - 1].name + "' uses an unknown edge");
    }
    for (std::size_t k = 0; k + 1 < img.size(); ++k) {
      if (terminus(img[k]) != origin(img[k + 1])) {
        throw MalformedInput("image of '" + edges_[i - 1].name + "' is not a path");
      }
    }
    const OrientedEdge e(i, false);
    if (origin(img.front()) != vertex_images_[origin(e)] ||
        terminus(img.back()) != vertex_images_[terminus(e)]) {
      throw MalformedInput("image of '" + edges_[i - 1].name +
                           "' does not respect the vertex map");
    }
  }
  // spanning tree from the lowest-index edges
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  tree_generator_.assign(ne + 1, 0);
  int next_generator = 0;
  for (int i = 1; i <= ne; ++i) {
    const int a = find_root(parent, edges_[i - 1].origin);
    const int b = find_root(parent, edges_[i - 1].terminus);
    if (a != b) {
      parent[a] = b;
    } else {
      tree_generator_[i] = ++next_generator;
    }
  }
  const int root = find_root(parent, 0);
  for (int v = 0; v < nv; ++v) {
    if (find_root(parent, v) != root) {
      throw MalformedInput("graph map: graph is not connected");
    }
  }
}

MarkedGraphMap MarkedGraphMap::rose(const Automorphism& phi) {
  std::vector<GraphEdge> edges;
  for (int g = 1; g <= phi.rank(); ++g) {
    edges.push_back({std::string(1, Letter(g, false).to_char()), 0, 0});
  }
  return MarkedGraphMap({"v"}, std::move(edges), phi.images(), {0}, phi.length_cap());
}

MarkedGraphMap MarkedGraphMap::parse(std::string_view text, std::size_t length_cap) {
  std::vector<std::string> vertices;
  std::map<std::string, int, std::less<>> vertex_index;
  std::vector<GraphEdge> edges;
  std::map<std::string, int, std::less<>> edge_index;
  std::vector<std::pair<std::string, std::string>> image_lines;
  std::vector<std::pair<std::string, std::string>> vertex_lines;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw MalformedInput("graph map line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.starts_with("vertices:")) {
      for (const auto& name : split_ws(line.substr(9))) {
        vertex_index[name] = static_cast<int>(vertices.size());
        vertices.push_back(name);
      }
      continue;
    }
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      fail("expected '->'");
    }
    const auto lhs = trim(line.substr(0, arrow));
    const auto rhs = trim(line.substr(arrow + 2));
    if (lhs.starts_with("edge ")) {
      // edge NAME: FROM -> TO
      const auto colon = lhs.find(':');
      if (colon == std::string_view::npos) {
        fail("expected 'edge NAME: FROM -> TO'");
      }
      const std::string name(trim(lhs.substr(5, colon - 5)));
      const std::string from(trim(lhs.substr(colon + 1)));
      const std::string to(rhs);
      if (!vertex_index.contains(from) || !vertex_index.contains(to)) {
        fail("edge endpoint not declared in vertices:");
      }
      if (edge_index.contains(name)) {
        fail("duplicate edge '" + name + "'");
      }
      edge_index[name] = static_cast<int>(edges.size()) + 1;
      edges.push_back({name, vertex_index[from], vertex_index[to]});
    } else if (lhs.starts_with("vertex ")) {
      vertex_lines.emplace_back(std::string(trim(lhs.substr(7))), std::string(rhs));
    } else {
      image_lines.emplace_back(std::string(lhs), std::string(rhs));
    }
  }

  if (vertices.empty()) {
    vertices.push_back("v");
    vertex_index["v"] = 0;
    for (const auto& [name, body] : image_lines) {
      if (edge_index.contains(name)) {
        throw MalformedInput("duplicate image for edge '" + name + "'");
      }
      edge_index[name] = static_cast<int>(edges.size()) + 1;
      edges.push_back({name, 0, 0});
    }
  }
  std::vector<int> vimages(vertices.size(), -1);
  if (vertices.size() == 1) {
    vimages[0] = 0;
  }
  for (const auto& [from, to] : vertex_lines) {
    if (!vertex_index.contains(from) || !vertex_index.contains(to)) {
      throw MalformedInput("vertex image names an undeclared vertex");
    }
    vimages[vertex_index[from]] = vertex_index[to];
  }
  for (std::size_t v = 0; v < vimages.size(); ++v) {
    if (vimages[v] < 0) {
      throw MalformedInput("vertex '" + vertices[v] + "' has no image");
    }
  }
  std::vector<EdgePath> images(edges.size());
  std::vector<bool> seen(edges.size(), false);
  for (const auto& [name, body] : image_lines) {
    auto it = edge_index.find(name);
    if (it == edge_index.end()) {
      throw MalformedInput("image given for undeclared edge '" + name + "'");
    }
    auto raw_path = tokenize_path(body, edge_index);
    EdgePath p(raw_path);
    if (p.size() != raw_path.size()) {
      throw MalformedInput("image of '" + name + "' is not reduced");
    }
    images[it->second - 1] = std::move(p);
    seen[it->second - 1] = true;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!seen[i]) {
      throw MalformedInput("edge '" + edges[i].name + "' has no image");
    }
  }
  return MarkedGraphMap(std::move(vertices), std::move(edges), std::move(images),
                        std::move(vimages), length_cap);
}

int MarkedGraphMap::origin(OrientedEdge e) const {
  const auto& ed = edges_[e.generator() - 1];
  return e.inverted() ? ed.terminus : ed.origin;
}

int MarkedGraphMap::terminus(OrientedEdge e) const {
  const auto& ed = edges_[e.generator() - 1];
  return e.inverted() ? ed.origin : ed.terminus;
}

EdgePath MarkedGraphMap::image(OrientedEdge e) const {
  const EdgePath& img = images_[e.generator() - 1];
  return e.inverted() ? img.inverse() : img;
}

bool MarkedGraphMap::is_positive() const {
  return std::all_of(images_.begin(), images_.end(), [](const EdgePath& p) {
    return std::none_of(p.begin(), p.end(), [](Letter x) { return x.inverted(); });
  });
}

std::optional<int> MarkedGraphMap::edge_by_name(std::string_view name) const {
  for (int i = 1; i <= edge_count(); ++i) {
    if (edges_[i - 1].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

EdgePath MarkedGraphMap::parse_path(std::string_view text) const {
  std::map<std::string, int, std::less<>> by_name;
  for (int i = 1; i <= edge_count(); ++i) {
    by_name[edges_[i - 1].name] = i;
  }
  auto raw = tokenize_path(text, by_name);
  for (std::size_t k = 0; k + 1 < raw.size(); ++k) {
    if (terminus(raw[k]) != origin(raw[k + 1])) {
      throw MalformedInput("'" + std::string(text) + "' is not an edge path");
    }
  }
  return EdgePath(raw);
}

std::string MarkedGraphMap::path_to_string(const EdgePath& p) const {
  if (is_rose() && std::all_of(edges_.begin(), edges_.end(), [](const GraphEdge& e) {
        return e.name.size() == 1;
      })) {
    std::string s;
    for (Letter x : p) {
      const char c = edges_[x.generator() - 1].name[0];
      s.push_back(x.inverted() ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    }
    return s.empty() ? "1" : s;
  }
  std::string s;
  for (Letter x : p) {
    if (!s.empty()) {
      s.push_back(' ');
    }
    s += edges_[x.generator() - 1].name;
    if (x.inverted()) {
      s += "^-1";
    }
  }
  return s.empty() ? "1" : s;
}

Word MarkedGraphMap::to_word(const EdgePath& p) const {
  if (is_rose()) {
    return p;
  }
  std::vector<Letter> raw;
  for (Letter x : p) {
    if (const int g = tree_generator_[x.generator()]; g != 0) {
      raw.emplace_back(g, x.inverted());
    }
  }
  return Word(raw);
}

EdgePath apply_map(const MarkedGraphMap& f, const EdgePath& p) {
  std::vector<Letter> out;
  for (Letter x : p) {
    const EdgePath img = f.image(x);
    if (!out.empty() && out.back() == img.front().inverse()) {
      throw NotATrainTrack("image of " + f.path_to_string(p) + " cancels at a seam");
    }
    out.insert(out.end(), img.begin(), img.end());
    if (out.size() > f.length_cap()) {
      throw LengthOverflow("edge path image too long", f.length_cap());
    }
  }
  return EdgePath::from_reduced(std::move(out));
}

bool check_train_track(const MarkedGraphMap& f, int max_iterations) {
  if (f.is_positive()) {
    return true;
  }
  try {
    for (int i = 1; i <= f.edge_count(); ++i) {
      EdgePath p{OrientedEdge(i, false)};
      for (int k = 1; k <= max_iterations; ++k) {
        p = apply_map(f, p);
      }
    }
  } catch (const NotATrainTrack&) {
    return false;
  }
  return true;
}

TransitionMatrix::TransitionMatrix(int n, std::vector<std::int64_t> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != static_cast<std::size_t>(n) * n) {
    throw MalformedInput("matrix data does not match dimension");
  }
  if (std::any_of(data_.begin(), data_.end(), [](std::int64_t v) { return v < 0; })) {
    throw MalformedInput("transition matrices are nonnegative");
  }
}

TransitionMatrix TransitionMatrix::identity(int n) {
  TransitionMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 1;
  }
  return m;
}

std::int64_t TransitionMatrix::column_sum(int col) const {
  std::int64_t s = 0;
  for (int r = 0; r < n_; ++r) {
    s += at(r, col);
  }
  return s;
}

bool TransitionMatrix::strictly_positive() const {
  return std::all_of(data_.begin(), data_.end(), [](std::int64_t v) { return v > 0; });
}

TransitionMatrix operator*(const TransitionMatrix& x, const TransitionMatrix& y) {
  if (x.n_ != y.n_) {
    throw RankMismatch("matrix dimensions differ");
  }
  const int n = x.n_;
  TransitionMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const std::int64_t a = x.at(i, k);
      if (a == 0) {
        continue;
      }
      for (int j = 0; j < n; ++j) {
        std::int64_t prod = 0;
        if (__builtin_mul_overflow(a, y.at(k, j), &prod) ||
            __builtin_add_overflow(out.at(i, j), prod, &out.at(i, j))) {
          throw Error("transition matrix power overflows 64-bit entries");
        }
      }
    }
  }
  return out;
}

TransitionMatrix TransitionMatrix::power(int k) const {
  TransitionMatrix result = identity(n_);
  TransitionMatrix base = *this;
  while (k > 0) {
    if (k & 1) {
      result = result * base;
    }
    k >>= 1;
    if (k > 0) {
      base = base * base;
    }
  }
  return result;
}

std::string TransitionMatrix::to_string() const {
  std::string s;
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      s += (c ? " " : "") + std::to_string(at(r, c));
    }
    s += "\n";
  }
  return s;
}

TransitionMatrix transition_matrix(const MarkedGraphMap& f) {
  const int n = f.edge_count();
  TransitionMatrix m(n);
  for (int j = 1; j <= n; ++j) {
    for (Letter x : f.image(OrientedEdge(j, false))) {
      ++m.at(x.generator() - 1, j - 1);
    }
  }
  return m;
}

Primitivity is_primitive(const TransitionMatrix& m) {
  const int n = m.dimension();
  if (n == 0) {
    return {};
  }
  std::vector<char> base(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      base[static_cast<std::size_t>(i) * n + j] = m.at(i, j) > 0;
    }
  }
  std::vector<char> current = base;
  std::vector<char> next(current.size());
  const int bound = (n - 1) * (n - 1) + 1;
  for (int k = 1; k <= bound; ++k) {
    if (std::all_of(current.begin(), current.end(), [](char c) { return c != 0; })) {
      return {true, k};
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        char v = 0;
        for (int l = 0; l < n && !v; ++l) {
          v = current[static_cast<std::size_t>(i) * n + l] && base[static_cast<std::size_t>(l) * n + j];
        }
        next[static_cast<std::size_t>(i) * n + j] = v;
      }
    }
    std::swap(current, next);
  }
  return {};
}

PerronFrobenius pf_data(const TransitionMatrix& m, double tolerance, int max_iterations) {
  if (!is_primitive(m).primitive) {
    throw HypothesisViolation("transition matrix is not primitive (aperiodic)");
  }
  const int n = m.dimension();
  std::vector<double> v(n, 1.0 / n);
  std::vector<double> w(n);
  PerronFrobenius out;
  double previous = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        s += static_cast<double>(m.at(i, j)) * v[j];
      }
      w[i] = s;
    }
    double vw = 0.0;
    double vv = 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      vw += v[i] * w[i];
      vv += v[i] * v[i];
      total += w[i];
    }
    const double rayleigh = vw / vv;
    for (int i = 0; i < n; ++i) {
      v[i] = w[i] / total;
    }
    out.iterations = it;
    out.eigenvalue = rayleigh;
    if (it > 1 && std::abs(rayleigh - previous) < tolerance) {
      break;
    }
    previous = rayleigh;
  }
  out.eigenvector = v;
  return out;
}

EdgePath leaf_segment(const MarkedGraphMap& f, OrientedEdge e, int n) {
  if (n < 0) {
    throw MalformedInput("leaf_segment: iteration count must be nonnegative");
  }
  EdgePath p{e};
  for (int k = 0; k < n; ++k) {
    p = apply_map(f, p);
  }
  // |f^n(e)| is the e-column sum of M^n
  const TransitionMatrix m = transition_matrix(f);
  std::vector<std::int64_t> u(m.dimension(), 0);
  u[e.generator() - 1] = 1;
  for (int k = 0; k < n; ++k) {
    std::vector<std::int64_t> next(m.dimension(), 0);
    for (int i = 0; i < m.dimension(); ++i) {
      for (int j = 0; j < m.dimension(); ++j) {
        next[i] += m.at(i, j) * u[j];
      }
    }
    u = std::move(next);
  }
  const auto expected = std::accumulate(u.begin(), u.end(), std::int64_t{0});
  if (expected != static_cast<std::int64_t>(p.size())) {
    throw NotATrainTrack("leaf segment length " + std::to_string(p.size()) +
                         " differs from the transition matrix prediction " +
                         std::to_string(expected));
  }
  return p;
}

std::vector<EigenRay> periodic_directions(const MarkedGraphMap& f) {
  const int directions = 2 * f.edge_count();
  std::vector<EigenRay> out;
  for (int idx = 0; idx < directions; ++idx) {
    const OrientedEdge start = Letter::from_index(idx);
    OrientedEdge d = start;
    for (int p = 1; p <= directions; ++p) {
      d = f.image(d).front();
      if (d == start) {
        out.push_back({f.origin(start), start, p});
        break;
      }
    }
  }
  return out;
}

namespace {

// Prefix of length <= limit of f(p); valid for legal paths because every
// edge image is nonempty.
EdgePath apply_map_prefix(const MarkedGraphMap& f, const EdgePath& p, std::size_t limit) {
  std::vector<Letter> out;
  for (Letter x : p) {
    if (out.size() >= limit) {
      break;
    }
    const EdgePath img = f.image(x);
    if (!out.empty() && out.back() == img.front().inverse()) {
      throw NotATrainTrack("eigenray iterate cancels at a seam");
    }
    for (Letter y : img) {
      if (out.size() >= limit) {
        break;
      }
      out.push_back(y);
    }
  }
  return EdgePath::from_reduced(std::move(out));
}

}  // namespace

EigenRayPrefix eigenray_prefix(const MarkedGraphMap& f, const EigenRay& ray, std::size_t length) {
  if (length > f.length_cap()) {
    throw LengthOverflow("eigenray prefix request", f.length_cap());
  }
  EdgePath current{ray.direction};
  if (length == 0) {
    return {EdgePath(), false};
  }
  while (current.size() < length) {
    EdgePath next = current;
    for (int k = 0; k < ray.period; ++k) {
      next = apply_map_prefix(f, next, length);
    }
    if (!next.starts_with(current)) {
      throw Error("eigenray prefixes are not nested; is the direction periodic?");
    }
    if (next.size() == current.size()) {
      return {current, true};
    }
    current = std::move(next);
  }
  return {current.prefix(length), false};
}

DiagonalPairs diagonal_pairs(const MarkedGraphMap& f) {
  DiagonalPairs out;
  const auto rays = periodic_directions(f);
  for (const EigenRay& r : rays) {
    if (eigenray_prefix(f, r, 2).degenerate) {
      out.degenerate = true;
    }
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      if (rays[i].base_vertex != rays[j].base_vertex) {
        continue;
      }
      out.pairs.push_back({rays[i], rays[j], std::lcm(rays[i].period, rays[j].period)});
    }
  }
  return out;
}

namespace {

// Factor sets of f^n(e), n = 0..n_max, with reverses.
std::vector<std::set<EdgePath>> edge_factor_sets(const MarkedGraphMap& f, int edge,
                                                 std::size_t length, int n_max) {
  std::vector<std::set<EdgePath>> sets(n_max + 1);
  EdgePath seg{OrientedEdge(edge, false)};
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      seg = apply_map(f, seg);
    }
    if (length == 0) {
      sets[n].insert(EdgePath());
      continue;
    }
    for (std::size_t pos = 0; pos + length <= seg.size(); ++pos) {
      EdgePath factor = seg.subword(pos, length);
      sets[n].insert(factor.inverse());
      sets[n].insert(std::move(factor));
    }
  }
  return sets;
}

LeafLanguage summarize(std::vector<std::set<EdgePath>> unions) {
  const int n_max = static_cast<int>(unions.size()) - 1;
  LeafLanguage out;
  out.stabilized_at = n_max;
  for (int n = 0; n <= n_max; ++n) {
    if (unions[n] == unions[n_max]) {
      out.stabilized_at = n;
      break;
    }
  }
  out.stable = out.stabilized_at < n_max;
  out.factors = std::move(unions[n_max]);
  return out;
}

}  // namespace

LeafLanguage leaf_language(const MarkedGraphMap& f, std::size_t length, int n_max) {
  const int edges = f.edge_count();
  std::vector<std::vector<std::set<EdgePath>>> per_edge(edges);
  std::vector<std::string> errors(edges);
#pragma omp parallel for schedule(dynamic, 1)
  for (int e = 1; e <= edges; ++e) {
    try {
      per_edge[e - 1] = edge_factor_sets(f, e, length, n_max);
    } catch (const std::exception& ex) {
      errors[e - 1] = ex.what();
    }
  }
  for (int e = 1; e <= edges; ++e) {
    if (!errors[e - 1].empty()) {
      // rerun serially so the original exception type propagates
      edge_factor_sets(f, e, length, n_max);
    }
  }
  std::vector<std::set<EdgePath>> unions(n_max + 1);
  for (auto& sets : per_edge) {
    for (int n = 0; n <= n_max; ++n) {
      unions[n].merge(sets[n]);
    }
  }
  return summarize(std::move(unions));
}

LeafLanguage leaf_language_serial(const MarkedGraphMap& f, std::size_t length, int n_max) {
  std::vector<std::set<EdgePath>> unions(n_max + 1);
  for (int e = 1; e <= f.edge_count(); ++e) {
    EdgePath seg{OrientedEdge(e, false)};
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) {
        seg = apply_map(f, seg);
      }
      if (length == 0) {
        unions[n].insert(EdgePath());
        continue;
      }
      for (std::size_t pos = 0; pos + length <= seg.size(); ++pos) {
        unions[n].insert(seg.subword(pos, length));
        unions[n].insert(seg.subword(pos, length).inverse());
      }
    }
  }
  return summarize(std::move(unions));
}

}  // namespace lamina
