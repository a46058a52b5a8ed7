#include "lamina/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "lamina/error.hpp"

namespace lamina {

char Letter::to_char() const {
  const char base = inverted() ? 'A' : 'a';
  return static_cast<char>(base + generator() - 1);
}

Word::Word(std::span<const Letter> raw) {
  letters_.reserve(raw.size());
  for (Letter x : raw) {
    push_reduced(letters_, x);
  }
}

Word Word::from_reduced(std::vector<Letter> letters) {
  Word w;
  w.letters_ = std::move(letters);
  return w;
}

Word Word::parse(std::string_view text, int rank) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw MalformedInput("cannot parse word '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (c == '1') {
      ++i;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      fail(std::string("unexpected character '") + c + "'");
    }
    const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    const int g = (upper ? c - 'A' : c - 'a') + 1;
    if (g > rank) {
      fail(std::string("generator '") + c + "' exceeds rank " + std::to_string(rank));
    }
    ++i;
    long exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      const char* first = text.data() + i;
      const char* last = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (ec != std::errc()) {
        fail("bad exponent");
      }
      i += static_cast<std::size_t>(ptr - first);
    }
    const bool inverted = upper != (exponent < 0);
    for (long k = 0; k < std::labs(exponent); ++k) {
      raw.emplace_back(g, inverted);
    }
  }
  return Word(raw);
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.size());
  std::transform(letters_.rbegin(), letters_.rend(), out.begin(),
                 [](Letter x) { return x.inverse(); });
  return from_reduced(std::move(out));
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, letters_.size());
  return from_reduced(std::vector<Letter>(letters_.begin(), letters_.begin() + n));
}

Word Word::suffix_from(std::size_t pos) const {
  pos = std::min(pos, letters_.size());
  return from_reduced(std::vector<Letter>(letters_.begin() + pos, letters_.end()));
}

Word Word::subword(std::size_t pos, std::size_t n) const {
  pos = std::min(pos, letters_.size());
  n = std::min(n, letters_.size() - pos);
  return from_reduced(std::vector<Letter>(letters_.begin() + pos, letters_.begin() + pos + n));
}

bool Word::starts_with(const Word& other) const {
  return other.size() <= size() &&
         std::equal(other.letters_.begin(), other.letters_.end(), letters_.begin());
}

int Word::max_generator() const {
  int m = 0;
  for (Letter x : letters_) {
    m = std::max(m, x.generator());
  }
  return m;
}

Word operator*(const Word& u, const Word& v) {
  Word out = u;
  out *= v;
  return out;
}

Word& Word::operator*=(const Word& v) {
  // cancellation only happens at the seam
  std::size_t k = 0;
  while (k < v.size() && k < letters_.size() &&
         letters_[letters_.size() - 1 - k] == v.letters_[k].inverse()) {
    ++k;
  }
  letters_.resize(letters_.size() - k);
  letters_.insert(letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(k),
                  v.letters_.end());
  return *this;
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (auto c = size() <=> other.size(); c != 0) {
    return c;
  }
  return std::lexicographical_compare_three_way(letters_.begin(), letters_.end(),
                                                other.letters_.begin(), other.letters_.end());
}

std::string Word::to_string() const {
  if (letters_.empty()) {
    return "1";
  }
  std::string s;
  s.reserve(letters_.size());
  for (Letter x : letters_) {
    s.push_back(x.to_char());
  }
  return s;
}

Word reduce(std::span<const Letter> raw, int rank) {
  for (Letter x : raw) {
    if (x.code() == 0 || x.generator() > rank) {
      throw MalformedInput("letter with generator index " + std::to_string(x.generator()) +
                           " outside 1.." + std::to_string(rank));
    }
  }
  return Word(raw);
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t k = 0;
  const std::size_t n = w.size();
  while (2 * k + 1 < n && w[k] == w[n - 1 - k].inverse()) {
    ++k;
  }
  return {w.subword(k, n - 2 * k), w.prefix(k)};
}

std::vector<Word> reduced_words_of_length(int rank, int n) {
  std::vector<Word> level{Word()};
  for (int len = 0; len < n; ++len) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (int idx = 0; idx < 2 * rank; ++idx) {
        const Letter x = Letter::from_index(idx);
        if (!w.empty() && w.back() == x.inverse()) {
          continue;
        }
        std::vector<Letter> letters(w.begin(), w.end());
        letters.push_back(x);
        next.push_back(Word::from_reduced(std::move(letters)));
      }
    }
    level = std::move(next);
  }
  return level;
}

std::vector<Word> reduced_words_up_to(int rank, int n) {
  std::vector<Word> all;
  for (int len = 0; len <= n; ++len) {
    auto level = reduced_words_of_length(rank, len);
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

std::vector<Word> parse_word_list(std::string_view text, int rank) {
  std::vector<Word> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) {
      comma = text.size();
    }
    std::string_view item = text.substr(start, comma - start);
    const bool blank = std::all_of(item.begin(), item.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) != 0;
    });
    if (!blank) {
      out.push_back(Word::parse(item, rank));
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace lamina
