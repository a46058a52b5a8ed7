#include "lamina/automorphism.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "lamina/error.hpp"

namespace lamina {

namespace detail {

// Memo of phi^n(g), n != 0. Entries are written once and never change, so a
// racing duplicate computation stores an identical value.
class PowerCache {
 public:
  std::shared_ptr<const Word> find(int n, int generator) const {
    std::shared_lock lock(mutex_);
    auto it = table_.find(n);
    if (it == table_.end()) {
      return nullptr;
    }
    return it->second[generator - 1];
  }

  void store(int n, int generator, int rank, std::shared_ptr<const Word> w) {
    std::unique_lock lock(mutex_);
    auto& row = table_[n];
    if (row.empty()) {
      row.resize(rank);
    }
    if (!row[generator - 1]) {
      row[generator - 1] = std::move(w);
    }
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<int, std::vector<std::shared_ptr<const Word>>> table_;
};

}  // namespace detail

namespace {

template <typename ImageOf>
void substitute_with(std::vector<Letter>& out, std::span<const Letter> w, ImageOf&& image_of) {
  for (Letter x : w) {
    const Word& img = image_of(x.generator());
    if (!x.inverted()) {
      for (Letter y : img) {
        push_reduced(out, y);
      }
    } else {
      for (auto it = img.end(); it != img.begin();) {
        --it;
        push_reduced(out, it->inverse());
      }
    }
  }
}

void check_rank(const Word& w, int rank) {
  if (w.max_generator() > rank) {
    throw RankMismatch("word " + w.to_string() + " uses a generator beyond rank " +
                       std::to_string(rank));
  }
}

void check_cap(std::size_t length, std::size_t cap) {
  if (length > cap) {
    throw LengthOverflow("iterated image too long: " + std::to_string(length) + " letters", cap);
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

void substitute_into(std::vector<Letter>& out, std::span<const Letter> w,
                     const std::vector<Word>& images) {
  substitute_with(out, w, [&](int g) -> const Word& { return images[g - 1]; });
}

Automorphism::Automorphism(std::vector<Word> forward, std::vector<Word> inverse,
                           std::size_t length_cap)
    : forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      cap_(length_cap),
      cache_(std::make_shared<detail::PowerCache>()) {
  if (forward_.empty()) {
    throw MalformedInput("automorphism needs at least one generator");
  }
  if (forward_.size() != inverse_.size()) {
    throw RankMismatch("forward and inverse image tables differ in size");
  }
  if (forward_.size() > static_cast<std::size_t>(kMaxRank)) {
    throw MalformedInput("rank above " + std::to_string(kMaxRank));
  }
  for (const auto& table : {std::cref(forward_), std::cref(inverse_)}) {
    for (const Word& w : table.get()) {
      check_rank(w, rank());
      if (w.empty()) {
        throw MalformedInput("generator image is trivial; not an automorphism");
      }
    }
  }
}

Automorphism Automorphism::identity(int rank) {
  std::vector<Word> gens;
  for (int g = 1; g <= rank; ++g) {
    gens.push_back(Word::generator(g));
  }
  return Automorphism(gens, gens);
}

Automorphism Automorphism::parse(std::string_view text, std::size_t length_cap) {
  std::vector<std::pair<int, std::string>> fwd;
  std::vector<std::pair<int, std::string>> inv;
  bool in_inverse = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
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
    if (line == "inverse:") {
      if (in_inverse) {
        throw MalformedInput("duplicate inverse: block");
      }
      in_inverse = true;
      continue;
    }
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      throw MalformedInput("line " + std::to_string(line_no) + ": expected 'x -> word'");
    }
    const auto lhs = trim(line.substr(0, arrow));
    if (lhs.size() != 1 || !std::islower(static_cast<unsigned char>(lhs[0]))) {
      throw MalformedInput("line " + std::to_string(line_no) + ": left side must be a generator");
    }
    const int g = lhs[0] - 'a' + 1;
    (in_inverse ? inv : fwd).emplace_back(g, std::string(trim(line.substr(arrow + 2))));
  }
  const int rank = static_cast<int>(fwd.size());
  if (rank == 0) {
    throw MalformedInput("automorphism text has no generator images");
  }
  if (!in_inverse) {
    throw MalformedInput("automorphism text lacks the required inverse: block");
  }
  auto build = [rank](std::vector<std::pair<int, std::string>>& rows, const char* what) {
    if (static_cast<int>(rows.size()) != rank) {
      throw MalformedInput(std::string(what) + " block must list exactly " +
                           std::to_string(rank) + " generators");
    }
    std::vector<Word> table(rank);
    std::vector<bool> seen(rank, false);
    for (auto& [g, body] : rows) {
      if (g > rank || seen[g - 1]) {
        throw MalformedInput(std::string(what) + " block: generators must be a.. once each");
      }
      seen[g - 1] = true;
      table[g - 1] = Word::parse(body, rank);
    }
    return table;
  };
  return Automorphism(build(fwd, "forward"), build(inv, "inverse"), length_cap);
}

Automorphism Automorphism::inverse() const { return Automorphism(inverse_, forward_, cap_); }

std::shared_ptr<const Word> Automorphism::power_image(int generator, int n) const {
  if (n == 0) {
    return std::make_shared<const Word>(Word::generator(generator));
  }
  if (auto hit = cache_->find(n, generator)) {
    return hit;
  }
  const int step = n > 0 ? 1 : -1;
  const Word& first = step > 0 ? image(generator) : inverse_image(generator);
  std::shared_ptr<const Word> result;
  if (n == step) {
    result = std::make_shared<const Word>(first);
  } else {
    // phi^n(g) = phi^(n-1)(phi(g))
    std::vector<std::shared_ptr<const Word>> held(rank() + 1);
    std::vector<Letter> out;
    substitute_with(out, first.letters(), [&](int h) -> const Word& {
      if (!held[h]) {
        held[h] = power_image(h, n - step);
      }
      return *held[h];
    });
    check_cap(out.size(), cap_);
    result = std::make_shared<const Word>(Word::from_reduced(std::move(out)));
  }
  cache_->store(n, generator, rank(), result);
  return cache_->find(n, generator);
}

std::string Automorphism::to_string() const {
  std::string s;
  for (int g = 1; g <= rank(); ++g) {
    s += Letter(g, false).to_char();
    s += " -> " + image(g).to_string() + "\n";
  }
  s += "inverse:\n";
  for (int g = 1; g <= rank(); ++g) {
    s += Letter(g, false).to_char();
    s += " -> " + inverse_image(g).to_string() + "\n";
  }
  return s;
}

Word apply(const Automorphism& phi, const Word& w) {
  check_rank(w, phi.rank());
  std::vector<Letter> out;
  substitute_into(out, w.letters(), phi.images());
  return Word::from_reduced(std::move(out));
}

Word iterate(const Automorphism& phi, const Word& w, int n) {
  check_rank(w, phi.rank());
  if (n == 0) {
    return w;
  }
  std::vector<std::shared_ptr<const Word>> held(phi.rank() + 1);
  std::vector<Letter> out;
  substitute_with(out, w.letters(), [&](int g) -> const Word& {
    if (!held[g]) {
      held[g] = phi.power_image(g, n);
    }
    return *held[g];
  });
  check_cap(out.size(), phi.length_cap());
  return Word::from_reduced(std::move(out));
}

Automorphism compose(const Automorphism& phi, const Automorphism& psi) {
  if (phi.rank() != psi.rank()) {
    throw RankMismatch("compose: ranks " + std::to_string(phi.rank()) + " and " +
                       std::to_string(psi.rank()));
  }
  std::vector<Word> fwd;
  std::vector<Word> inv;
  for (int g = 1; g <= phi.rank(); ++g) {
    fwd.push_back(apply(phi, psi.image(g)));
    // (phi o psi)^-1 = psi^-1 o phi^-1
    inv.push_back(apply(psi.inverse(), phi.inverse_image(g)));
  }
  return Automorphism(std::move(fwd), std::move(inv), std::min(phi.length_cap(), psi.length_cap()));
}

Automorphism power(const Automorphism& phi, int n) {
  std::vector<Word> fwd;
  std::vector<Word> inv;
  for (int g = 1; g <= phi.rank(); ++g) {
    fwd.push_back(*phi.power_image(g, n));
    inv.push_back(*phi.power_image(g, -n));
  }
  return Automorphism(std::move(fwd), std::move(inv), phi.length_cap());
}

InverseReport verify_inverse(const Automorphism& phi) {
  InverseReport report;
  const Automorphism inv = phi.inverse();
  for (int g = 1; g <= phi.rank(); ++g) {
    const Word gen = Word::generator(g);
    if (apply(phi, phi.inverse_image(g)) != gen || apply(inv, phi.image(g)) != gen) {
      report.ok = false;
      report.failing_generators.push_back(g);
    }
  }
  return report;
}

Word homotopy_rep(const Automorphism& phi, const Word& h, int n, Direction direction) {
  if (h.empty()) {
    throw MalformedInput("homotopy_rep: trivial element carries no lamination data");
  }
  const int signed_n = direction == Direction::forward ? n : -n;
  return cyclic_reduce(iterate(phi, h, signed_n)).core;
}

Ratio Ratio::parse(std::string_view text) {
  text = trim(text);
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw MalformedInput("bad ratio '" + std::string(text) + "'");
    }
    return v;
  };
  Ratio r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    r.num = parse_int(trim(text.substr(0, slash)));
    r.den = parse_int(trim(text.substr(slash + 1)));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    r.num = parse_int(std::string(text.substr(0, dot)) + std::string(frac));
    r.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      r.den *= 10;
    }
  } else {
    r.num = parse_int(text);
  }
  if (r.den <= 0) {
    throw MalformedInput("ratio denominator must be positive");
  }
  return r;
}

bool stretch_check(const Automorphism& phi, const Word& h, int n, Ratio lambda) {
  const auto fwd = static_cast<std::int64_t>(iterate(phi, h, n).size());
  const auto bwd = static_cast<std::int64_t>(iterate(phi, h, -n).size());
  const auto base = static_cast<std::int64_t>(h.size());
  // max(|.|) > (num/den) |h|  <=>  max * den > num * |h|
  return std::max(fwd, bwd) * lambda.den > lambda.num * base;
}

}  // namespace lamina
