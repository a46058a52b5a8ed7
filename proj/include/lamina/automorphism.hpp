#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lamina/word.hpp"

namespace lamina {

inline constexpr std::size_t kDefaultLengthCap = 1'000'000;

namespace detail {
class PowerCache;
}

// An automorphism of the free group of the given rank, specified by the
// images of the generators together with the images under its inverse.
// Inverse images are inputs; verify_inverse certifies them.
//
// Copies share one memo table of generator powers, keyed by exponent.
class Automorphism {
 public:
  Automorphism(std::vector<Word> forward, std::vector<Word> inverse,
               std::size_t length_cap = kDefaultLengthCap);

  static Automorphism identity(int rank);

  // Text format, one line per generator followed by an "inverse:" block:
  //
  //   a -> a b
  //   b -> a
  //   inverse:
  //   a -> b
  //   b -> b^-1 a
  //
  // '#' starts a comment. Generators are the first `rank` letters.
  static Automorphism parse(std::string_view text, std::size_t length_cap = kDefaultLengthCap);

  int rank() const { return static_cast<int>(forward_.size()); }
  const Word& image(int generator) const { return forward_[generator - 1]; }
  const Word& inverse_image(int generator) const { return inverse_[generator - 1]; }
  const std::vector<Word>& images() const { return forward_; }
  const std::vector<Word>& inverse_images() const { return inverse_; }
  std::size_t length_cap() const { return cap_; }

  // Swaps forward and inverse images (fresh memo table).
  Automorphism inverse() const;

  // phi^n(g) for a generator, memoized. n may be negative.
  std::shared_ptr<const Word> power_image(int generator, int n) const;

  // Text in the parse() format.
  std::string to_string() const;

 private:
  std::vector<Word> forward_;
  std::vector<Word> inverse_;
  std::size_t cap_;
  std::shared_ptr<detail::PowerCache> cache_;
};

// Substitutes images for letters and reduces; inverse letters map to inverted
// images. Appends to out, which must already be reduced.
void substitute_into(std::vector<Letter>& out, std::span<const Letter> w,
                     const std::vector<Word>& images);

Word apply(const Automorphism& phi, const Word& w);
// n-fold application; negative n uses the inverse images.
Word iterate(const Automorphism& phi, const Word& w, int n);
// (phi o psi)(g) = phi(psi(g)).
Automorphism compose(const Automorphism& phi, const Automorphism& psi);
Automorphism power(const Automorphism& phi, int n);

struct InverseReport {
  bool ok = true;
  // Generators g for which phi(phi^-1(g)) != g or phi^-1(phi(g)) != g,
  // ascending.
  std::vector<int> failing_generators;
};

InverseReport verify_inverse(const Automorphism& phi);

enum class Direction { forward, backward };

// Shortest representative of the conjugacy class of phi^{+-n}(h).
Word homotopy_rep(const Automorphism& phi, const Word& h, int n, Direction direction);

struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;
  // Accepts "3/2", "1.5", "2".
  static Ratio parse(std::string_view text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// True iff max(|phi^n(h)|, |phi^-n(h)|) > lambda |h|.
bool stretch_check(const Automorphism& phi, const Word& h, int n, Ratio lambda);

}  // namespace lamina
