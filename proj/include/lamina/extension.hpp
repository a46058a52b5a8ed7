#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lamina/automorphism.hpp"
#include "lamina/subgroup.hpp"
#include "lamina/word.hpp"

// Arithmetic in the mapping torus G = F x|_phi Z with stable letter t and the
// convention t h t^-1 = phi(h). Consequently h t = t phi^-1(h) and
// h t^-1 = t^-1 phi(h).
namespace lamina {

// The element t^t_exp * tail.
struct NormalForm {
  int t_exp = 0;
  Word tail;

  static NormalForm identity() { return {}; }
  bool is_identity() const { return t_exp == 0 && tail.empty(); }
  bool operator==(const NormalForm&) const = default;
  std::string to_string() const;
};

// A generator of G: a letter of F or t^{+-1}.
class GLetter {
 public:
  static GLetter free(Letter x) { return GLetter(x, 0); }
  static GLetter stable(int sign) { return GLetter(Letter(), sign < 0 ? -1 : 1); }

  bool is_stable() const { return t_sign_ != 0; }
  int t_sign() const { return t_sign_; }
  Letter letter() const { return letter_; }
  GLetter inverse() const { return is_stable() ? stable(-t_sign_) : free(letter_.inverse()); }
  bool operator==(const GLetter&) const = default;
  std::string to_string() const;

 private:
  GLetter(Letter x, int t_sign) : letter_(x), t_sign_(t_sign) {}
  Letter letter_;
  int t_sign_ = 0;
};

// Word over F-letters and t. 't'/'T' (or t^-1) is the stable letter, so the
// ambient rank must stay below 20 for text input. Example: "t a T".
std::vector<GLetter> parse_gword(std::string_view text, int rank);

// The 2*rank+2 generators in search order: a, A, b, B, ..., t, T.
std::vector<GLetter> g_generators(int rank);

NormalForm normalize(std::span<const GLetter> raw, const Automorphism& phi);
NormalForm multiply(const NormalForm& x, const NormalForm& y, const Automorphism& phi);
NormalForm inverse(const NormalForm& x, const Automorphism& phi);
NormalForm right_multiply(const NormalForm& x, GLetter s, const Automorphism& phi);
NormalForm as_element(GLetter s);

struct GLength {
  std::optional<int> value;
  // Exact value when known, otherwise max_radius + 1.
  int lower_bound = 0;
};

// Word length in G by bidirectional breadth-first search, exact up to
// max_radius.
GLength g_length(const NormalForm& x, const Automorphism& phi, int max_radius,
                 std::size_t max_states = 2'000'000);

struct GeodesicRealization {
  NormalForm start;
  NormalForm end;
  // Vertices of one geodesic from start to end; empty if none was found
  // within the radius.
  std::vector<NormalForm> path;
  std::optional<int> length;
  // Least distance from the identity along the path.
  std::optional<int> min_dist;
};

// A geodesic of G between the endpoints of lambda (a path in H), after
// translating lambda so that its midpoint sits at the identity.
GeodesicRealization geodesic_realization(const Word& lambda, const Automorphism& phi,
                                         int max_radius, std::size_t max_states = 2'000'000);

struct WitnessRecord {
  int n = 0;
  std::size_t h_length = 0;  // |phi^n(a)|
  int g_bound = 0;           // 2n + 1, the length of t^n a t^-n
  std::optional<int> g_exact;
  // normalize(t^n a t^-n) == phi^n(a)
  bool certified = false;
};

// g_exact is computed only when max_radius > 0.
WitnessRecord witness_distortion(const Automorphism& phi, int n, int max_radius = 0);

// Length of elements of a subgroup measured in its own generators.
class IntrinsicMetric {
 public:
  IntrinsicMetric(std::vector<Word> generators, int rank, std::size_t max_states = 1'000'000);

  // Shortest generator word for u; nullopt if u is outside the subgroup or
  // beyond the search cap.
  std::optional<std::size_t> length(const Word& u);
  // Generators whose wedge of loops is already folded form a free basis, and
  // lengths are read directly off the wedge.
  bool reads_from_wedge() const { return wedge_folded_; }
  // Forces the breadth-first route (used to cross-check the wedge reading).
  std::optional<std::size_t> search_length(const Word& u);

 private:
  std::vector<Word> generators_;
  int rank_;
  std::optional<CoreGraph> core_;  // membership is decided here before searching
  std::size_t max_states_;
  bool wedge_folded_ = false;
  std::vector<std::vector<int>> wedge_;  // vertex -> letter index -> vertex
  std::unordered_map<Word, std::size_t> seen_;
  std::vector<Word> frontier_;
  std::size_t depth_ = 0;
  bool exhausted_ = false;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  // ||y - fit|| / ||y||
  double relative_residual = 0.0;
  std::size_t samples = 0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace lamina

template <>
struct std::hash<lamina::NormalForm> {
  std::size_t operator()(const lamina::NormalForm& x) const noexcept {
    return std::hash<lamina::Word>{}(x.tail) ^ (static_cast<std::size_t>(x.t_exp) * 0x9e3779b97f4a7c15ull);
  }
};
