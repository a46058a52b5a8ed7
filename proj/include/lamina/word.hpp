#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lamina {

// Largest rank expressible in the one-character-per-generator text format.
inline constexpr int kMaxRank = 26;

// A generator of the free group or its inverse. Generators are numbered from
// 1; the letter order is a < A < b < B < ... (A = a^-1).
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, bool inverted)
      : code_(inverted ? -generator : generator) {}

  static constexpr Letter from_code(std::int32_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  constexpr int generator() const { return code_ < 0 ? -code_ : code_; }
  constexpr bool inverted() const { return code_ < 0; }
  constexpr int sign() const { return code_ < 0 ? -1 : 1; }
  constexpr Letter inverse() const { return from_code(-code_); }
  constexpr std::int32_t code() const { return code_; }
  // Dense position in 0 .. 2*rank-1, following the letter order.
  constexpr int index() const { return 2 * (generator() - 1) + (inverted() ? 1 : 0); }
  static constexpr Letter from_index(int index) {
    return Letter(index / 2 + 1, (index % 2) != 0);
  }

  constexpr bool operator==(const Letter&) const = default;
  constexpr std::strong_ordering operator<=>(const Letter& other) const {
    return index() <=> other.index();
  }

  char to_char() const;

 private:
  std::int32_t code_ = 0;
};

// A freely reduced word. Every constructor reduces, so a Word never holds an
// adjacent pair x x^-1.
class Word {
 public:
  Word() = default;
  explicit Word(std::span<const Letter> raw);
  Word(std::initializer_list<Letter> raw) : Word(std::span<const Letter>(raw.begin(), raw.size())) {}

  // Adopts letters that the caller guarantees are already reduced.
  static Word from_reduced(std::vector<Letter> letters);
  static Word generator(int g) { return from_reduced({Letter(g, false)}); }

  // Parses "a b A", "abA", "a^-1 b^2", "1" (identity). Uppercase letters are
  // inverses. Throws MalformedInput if a generator exceeds rank.
  static Word parse(std::string_view text, int rank = kMaxRank);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& front() const { return letters_.front(); }
  const Letter& back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  std::span<const Letter> letters() const { return letters_; }

  Word inverse() const;
  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t pos) const;
  Word subword(std::size_t pos, std::size_t n) const;
  bool starts_with(const Word& other) const;
  // Highest generator index used, 0 for the empty word.
  int max_generator() const;

  friend Word operator*(const Word& u, const Word& v);
  Word& operator*=(const Word& v);

  bool operator==(const Word&) const = default;
  // Shortlex order.
  std::strong_ordering operator<=>(const Word& other) const;

  std::string to_string() const;

 private:
  std::vector<Letter> letters_;
};

// Free reduction of an arbitrary letter sequence. Generators above rank are
// rejected with MalformedInput.
Word reduce(std::span<const Letter> raw, int rank);

// Appends letter to a reduced buffer, cancelling against its last letter.
inline void push_reduced(std::vector<Letter>& buffer, Letter x) {
  if (!buffer.empty() && buffer.back() == x.inverse()) {
    buffer.pop_back();
  } else {
    buffer.push_back(x);
  }
}

struct CyclicReduction {
  Word core;
  Word conjugator;
};

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
CyclicReduction cyclic_reduce(const Word& w);

// Words of length exactly n in shortlex order (all reduced words over rank
// generators).
std::vector<Word> reduced_words_of_length(int rank, int n);
// All reduced words of length <= n, shortlex.
std::vector<Word> reduced_words_up_to(int rank, int n);

std::vector<Word> parse_word_list(std::string_view text, int rank = kMaxRank);

}  // namespace lamina

template <>
struct std::hash<lamina::Word> {
  std::size_t operator()(const lamina::Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& x : w) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x.code()));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};
