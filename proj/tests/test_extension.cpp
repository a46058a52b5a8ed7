#include <doctest.h>

#include <cmath>
#include <random>

#include "lamina/ball.hpp"
#include "lamina/config.hpp"
#include "lamina/error.hpp"
#include "lamina/extension.hpp"
#include "oracles.hpp"

using namespace lamina;

namespace {

Automorphism load(const char* name) {
  return Automorphism::parse(read_file(std::string(LAMINA_DATA_DIR "/") + name));
}

NormalForm random_element(std::mt19937_64& rng, int rank) {
  const int t = static_cast<int>(rng() % 7) - 3;
  return {t, oracle::word(oracle::random_word(rng, rank, 6))};
}

// Product of a G-word evaluated letter by letter with the defining
// relations only: t u = phi(u) t.
NormalForm slow_eval(const std::vector<GLetter>& letters, const Automorphism& phi) {
  NormalForm x;
  for (GLetter s : letters) {
    x = right_multiply(x, s, phi);
  }
  return x;
}

}  // namespace

TEST_CASE("conjugation by t applies the automorphism") {
  for (const char* name : {"rauzy.aut", "fib.aut", "factor4.aut"}) {
    const Automorphism phi = load(name);
    for (int g = 1; g <= phi.rank(); ++g) {
      const std::vector<GLetter> w{GLetter::stable(1), GLetter::free(Letter(g, false)),
                                   GLetter::stable(-1)};
      CHECK(normalize(w, phi) == NormalForm{0, phi.image(g)});
      const std::vector<GLetter> v{GLetter::stable(-1), GLetter::free(Letter(g, false)),
                                   GLetter::stable(1)};
      CHECK(normalize(v, phi) == NormalForm{0, phi.inverse_image(g)});
    }
  }
}

TEST_CASE("group axioms on random normal forms") {
  const Automorphism phi = load("rauzy.aut");
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const NormalForm x = random_element(rng, 3);
    const NormalForm y = random_element(rng, 3);
    const NormalForm z = random_element(rng, 3);
    CHECK(multiply(multiply(x, y, phi), z, phi) == multiply(x, multiply(y, z, phi), phi));
    CHECK(multiply(x, inverse(x, phi), phi).is_identity());
    CHECK(multiply(inverse(x, phi), x, phi).is_identity());
    CHECK(multiply(x, NormalForm::identity(), phi) == x);
  }
}

TEST_CASE("normalize agrees with letter-by-letter evaluation") {
  const Automorphism phi = load("fib.aut");
  std::mt19937_64 rng(4);
  const auto gens = g_generators(2);
  for (int i = 0; i < 300; ++i) {
    std::vector<GLetter> w;
    const int n = static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) {
      w.push_back(gens[rng() % gens.size()]);
    }
    const NormalForm a = normalize(w, phi);
    CHECK(a == slow_eval(w, phi));
    NormalForm b;
    for (GLetter s : w) {
      b = multiply(b, as_element(s), phi);
    }
    CHECK(a == b);
  }
}

TEST_CASE("parse G-words") {
  const Automorphism phi = load("fib.aut");
  CHECK(normalize(parse_gword("t a T", 2), phi).to_string() == normalize(parse_gword("ab", 2), phi).to_string());
  CHECK(normalize(parse_gword("a t", 2), phi) == NormalForm{1, Word::parse("b")});
  CHECK(normalize(parse_gword("t^-1 t^2", 2), phi) == NormalForm{1, Word()});
  CHECK(g_generators(3).size() == 8);
  CHECK_THROWS_AS(parse_gword("a x", 2), MalformedInput);
  CHECK(NormalForm{2, Word::parse("ab")}.to_string() == "t^2.ab");
}

TEST_CASE("G-length matches the reference ball") {
  const Automorphism phi = load("fib.aut");
  const auto ref = build_ball_reference(phi, 5);
  for (const auto& [x, d] : ref) {
    const GLength g = g_length(x, phi, 5);
    REQUIRE(g.value);
    CHECK(*g.value == d);
  }
  const GLength far = g_length(NormalForm{9, Word()}, phi, 5);
  CHECK_FALSE(far.value);
  CHECK(far.lower_bound == 6);
}

TEST_CASE("witness certificate") {
  const Automorphism phi = load("rauzy.aut");
  for (int n = 0; n <= 8; ++n) {
    const WitnessRecord w = witness_distortion(phi, n);
    CHECK(w.certified);
    CHECK(w.g_bound == 2 * n + 1);
    CHECK(w.h_length == iterate(phi, Word::generator(1), n).size());
  }
  const WitnessRecord exact = witness_distortion(phi, 2, 5);
  REQUIRE(exact.g_exact);
  CHECK(*exact.g_exact <= 5);
  CHECK(*exact.g_exact == *g_length(NormalForm{0, Word::parse("abac")}, phi, 5).value);
}

TEST_CASE("geodesic realization is a geodesic between the translated endpoints") {
  const Automorphism phi = load("rauzy.aut");
  const Word lambda = iterate(phi, Word::generator(1), 3);
  const GeodesicRealization g = geodesic_realization(lambda, phi, 8);
  REQUIRE(g.length);
  REQUIRE(!g.path.empty());
  CHECK(g.path.front() == g.start);
  CHECK(g.path.back() == g.end);
  CHECK(static_cast<int>(g.path.size()) == *g.length + 1);
  CHECK(multiply(inverse(g.start, phi), g.end, phi) == NormalForm{0, lambda});
  for (std::size_t i = 0; i + 1 < g.path.size(); ++i) {
    const NormalForm step = multiply(inverse(g.path[i], phi), g.path[i + 1], phi);
    CHECK(*g_length(step, phi, 1).value == 1);
  }
  CHECK(*g.length == *g_length(NormalForm{0, lambda}, phi, 8).value);
  REQUIRE(g.min_dist);
  CHECK(*g.min_dist <= *g.length / 2 + 1);
}

TEST_CASE("intrinsic metric: wedge reading agrees with search") {
  std::mt19937_64 rng(12);
  const std::vector<std::vector<Word>> subjects{
      parse_word_list("a", 3), parse_word_list("a, b", 3), parse_word_list("ab, c", 3),
      parse_word_list("abc, bb", 3)};
  for (const auto& gens : subjects) {
    IntrinsicMetric fast(gens, 3);
    IntrinsicMetric slow(gens, 3, 200000);
    CHECK(fast.reads_from_wedge());
    const CoreGraph core = CoreGraph::fold(gens, 3);
    for (int i = 0; i < 200; ++i) {
      const Word w = oracle::word(oracle::random_word(rng, 3, 6));
      if (!membership(core, w)) {
        CHECK_FALSE(fast.length(w));
        continue;
      }
      CHECK(fast.length(w) == slow.search_length(w));
    }
    for (const Word& g : gens) {
      CHECK(*fast.length(g * g * g) == 3);
    }
  }
  // non-members are rejected without searching
  IntrinsicMetric cyclic(parse_word_list("a", 3), 3);
  CHECK_FALSE(cyclic.search_length(Word::parse("b")));
  CHECK(*cyclic.search_length(Word::parse("AAAA")) == 4);
  IntrinsicMetric folded(parse_word_list("a^2, b, a b A", 2), 2);
  CHECK_FALSE(folded.reads_from_wedge());
  CHECK(*folded.length(Word::parse("aab")) == 2);
  CHECK(*folded.length(Word::parse("abAb")) == 2);
  CHECK_FALSE(folded.length(Word::parse("aaba")));
}

TEST_CASE("linear fit") {
  const std::vector<double> x{3, 4, 5, 6, 7, 8};
  std::vector<double> y;
  for (double v : x) {
    y.push_back(2 * v + 1);
  }
  const LinearFit f = fit_linear(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.relative_residual == doctest::Approx(0.0));
  std::vector<double> expo;
  for (double v : x) {
    expo.push_back(std::pow(3.0, v));
  }
  CHECK(fit_linear(x, expo).relative_residual > 0.25);
}
