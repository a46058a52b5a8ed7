#pragma once
// Brute-force references. They work on plain vectors of signed generator
// codes (a = 1, A = -1, ...) and share no code with the library beyond
// conversions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "lamina/word.hpp"

namespace oracle {

using Raw = std::vector<int>;

// Deletes adjacent inverse pairs until none remain, rescanning from the start.
inline Raw naive_reduce(Raw w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline Raw raw(const lamina::Word& w) {
  Raw out;
  for (lamina::Letter x : w) {
    out.push_back(x.code());
  }
  return out;
}

inline lamina::Word word(const Raw& r) {
  std::vector<lamina::Letter> letters;
  for (int c : r) {
    letters.push_back(lamina::Letter::from_code(c));
  }
  return lamina::Word(letters);
}

inline Raw concat(Raw u, const Raw& v) {
  u.insert(u.end(), v.begin(), v.end());
  return naive_reduce(u);
}

inline Raw invert(const Raw& w) {
  Raw out(w.rbegin(), w.rend());
  for (int& c : out) {
    c = -c;
  }
  return out;
}

// Substitution x -> images[x] on raw words, reduced afterwards.
inline Raw substitute(const Raw& w, const std::vector<Raw>& images) {
  Raw out;
  for (int c : w) {
    const Raw img = c > 0 ? images[c - 1] : invert(images[-c - 1]);
    out.insert(out.end(), img.begin(), img.end());
  }
  return naive_reduce(out);
}

inline Raw random_word(std::mt19937_64& rng, int rank, int max_len, bool reduced = true) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution inv(0.5);
  Raw w;
  const int n = len(rng);
  while (static_cast<int>(w.size()) < n) {
    const int c = inv(rng) ? -gen(rng) : gen(rng);
    if (reduced && !w.empty() && w.back() == -c) {
      continue;
    }
    w.push_back(c);
  }
  return w;
}

// All reduced words of length <= n, by extension.
inline std::vector<Raw> all_reduced(int rank, int n) {
  std::vector<Raw> out{{}};
  std::vector<Raw> layer{{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<Raw> next;
    for (const Raw& w : layer) {
      for (int g = 1; g <= rank; ++g) {
        for (int c : {g, -g}) {
          if (!w.empty() && w.back() == -c) {
            continue;
          }
          Raw x = w;
          x.push_back(c);
          next.push_back(x);
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Nielsen conditions on gens and their inverses: N0 no trivial element,
// N1 |uv| >= max(|u|, |v|) for u != v^-1, N2 |uvw| > |u| - |v| + |w| for
// u != v^-1, v != w^-1. Products of k elements of a Nielsen-reduced set
// then have length >= k, and partial products never shrink.
inline bool nielsen_reduced(const std::vector<Raw>& gens) {
  std::vector<Raw> s;
  for (const Raw& g : gens) {
    if (g.empty()) {
      return false;
    }
    s.push_back(g);
    s.push_back(invert(g));
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if ((i ^ 1) == j) {
        continue;
      }
      if (i != j && (s[i] == s[j] || s[i] == invert(s[j]))) {
        return false;
      }
      const Raw uv = concat(s[i], s[j]);
      if (uv.size() < std::max(s[i].size(), s[j].size())) {
        return false;
      }
      for (std::size_t k = 0; k < s.size(); ++k) {
        if ((j ^ 1) == k) {
          continue;
        }
        const Raw uvw = concat(uv, s[k]);
        if (static_cast<long>(uvw.size()) <=
            static_cast<long>(s[i].size()) - static_cast<long>(s[j].size()) +
                static_cast<long>(s[k].size())) {
          return false;
        }
      }
    }
  }
  return true;
}

// Elements of <gens> of length <= max_len, by enumerating products of the
// generators. Requires a Nielsen-reduced set, for which this is exact.
inline std::set<Raw> subgroup_ball(const std::vector<Raw>& gens, int max_len) {
  std::vector<Raw> s;
  for (const Raw& g : gens) {
    s.push_back(g);
    s.push_back(invert(g));
  }
  std::set<Raw> out{{}};
  struct Frame {
    Raw value;
    int last;
  };
  std::vector<Frame> stack{{{}, -1}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
      if (f.last >= 0 && (f.last ^ 1) == i) {
        continue;
      }
      Raw next = concat(f.value, s[i]);
      if (static_cast<int>(next.size()) > max_len) {
        continue;
      }
      out.insert(next);
      stack.push_back({std::move(next), i});
    }
  }
  return out;
}

// Number of right cosets H u met by words of length <= L, where membership
// of u v^-1 is looked up in members (which must hold every element of
// length <= 2L). The sequence stabilizes exactly when the index is finite,
// and then equals it.
inline std::vector<std::size_t> coset_counts(const std::set<Raw>& members, int rank, int max_l) {
  std::vector<std::size_t> counts;
  std::vector<Raw> reps;
  for (int l = 0; l <= max_l; ++l) {
    for (const Raw& u : all_reduced(rank, l)) {
      if (static_cast<int>(u.size()) != l) {
        continue;
      }
      bool fresh = true;
      for (const Raw& v : reps) {
        if (members.count(concat(u, invert(v)))) {
          fresh = false;
          break;
        }
      }
      if (fresh) {
        reps.push_back(u);
      }
    }
    counts.push_back(reps.size());
  }
  return counts;
}

// Boolean matrix powers, scanned up to (n-1)^2 + 1.
struct PrimitiveScan {
  bool primitive = false;
  int power = 0;
};

inline PrimitiveScan scan_primitive(const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<int>> p = m;
  const int bound = (n - 1) * (n - 1) + 1;
  for (int k = 1; k <= bound; ++k) {
    bool positive = true;
    for (const auto& row : p) {
      for (int x : row) {
        positive = positive && x != 0;
      }
    }
    if (positive) {
      return {true, k};
    }
    std::vector<std::vector<int>> q(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          if (p[i][l] && m[l][j]) {
            q[i][j] = 1;
          }
        }
      }
    }
    p = std::move(q);
  }
  return {false, 0};
}

}  // namespace oracle
