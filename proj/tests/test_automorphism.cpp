#include <doctest.h>

#include <random>

#include "lamina/automorphism.hpp"
#include "lamina/error.hpp"
#include "oracles.hpp"

using namespace lamina;

namespace {

Automorphism rauzy() {
  return Automorphism::parse("a -> ab\nb -> ac\nc -> a\ninverse:\na -> c\nb -> C a\nc -> C b\n");
}

Automorphism fib() { return Automorphism::parse("a -> ab\nb -> a\ninverse:\na -> b\nb -> B a\n"); }

std::vector<oracle::Raw> raw_images(const std::vector<Word>& ws) {
  std::vector<oracle::Raw> out;
  for (const Word& w : ws) {
    out.push_back(oracle::raw(w));
  }
  return out;
}

}  // namespace

TEST_CASE("parse and print round trip") {
  const Automorphism phi = rauzy();
  CHECK(phi.rank() == 3);
  CHECK(phi.image(2).to_string() == "ac");
  CHECK(phi.inverse_image(2).to_string() == "Ca");
  CHECK(Automorphism::parse(phi.to_string()).images() == phi.images());
}

TEST_CASE("parse rejects malformed text") {
  CHECK_THROWS_AS(Automorphism::parse("a -> ab\nb -> a\n"), MalformedInput);
  CHECK_THROWS_AS(Automorphism::parse("a -> ab\nb -> a\ninverse:\na -> b\n"), MalformedInput);
  CHECK_THROWS_AS(Automorphism::parse("a ab\ninverse:\na -> a\n"), MalformedInput);
  CHECK_THROWS_AS(Automorphism::parse("a -> 1\nb -> b\ninverse:\na -> a\nb -> b\n"), MalformedInput);
}

TEST_CASE("inverse certification") {
  CHECK(verify_inverse(rauzy()).ok);
  CHECK(verify_inverse(fib()).ok);
  const Automorphism bad = Automorphism::parse("a -> ab\nb -> a\ninverse:\na -> b\nb -> a\n");
  const InverseReport rep = verify_inverse(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.failing_generators == std::vector<int>{1, 2});
}

TEST_CASE("apply matches substitution oracle and is a homomorphism") {
  std::mt19937_64 rng(5);
  const Automorphism phi = rauzy();
  const auto images = raw_images(phi.images());
  for (int i = 0; i < 500; ++i) {
    const oracle::Raw u = oracle::random_word(rng, 3, 10);
    const oracle::Raw v = oracle::random_word(rng, 3, 10);
    const Word pu = apply(phi, oracle::word(u));
    CHECK(oracle::raw(pu) == oracle::substitute(u, images));
    CHECK(apply(phi, oracle::word(u) * oracle::word(v)) == pu * apply(phi, oracle::word(v)));
    CHECK(iterate(phi, pu, -1) == oracle::word(u));
  }
}

TEST_CASE("tribonacci lengths of rauzy iterates") {
  const Automorphism phi = rauzy();
  std::vector<std::size_t> t{1, 2, 4};
  while (t.size() < 16) {
    t.push_back(t[t.size() - 1] + t[t.size() - 2] + t[t.size() - 3]);
  }
  for (int n = 0; n < 16; ++n) {
    CHECK(iterate(phi, Word::generator(1), n).size() == t[n]);
  }
  CHECK(iterate(phi, Word::generator(1), 4).to_string() == "abacabaabacab");
}

TEST_CASE("power cache agrees with direct iteration across copies") {
  const Automorphism phi = fib();
  const Automorphism copy = phi;
  for (int n = -6; n <= 10; ++n) {
    Word direct = Word::generator(2);
    for (int k = 0; k < std::abs(n); ++k) {
      direct = apply(n > 0 ? phi : phi.inverse(), direct);
    }
    CHECK(*copy.power_image(2, n) == direct);
    CHECK(iterate(phi, Word::generator(2), n) == direct);
  }
}

TEST_CASE("compose and power") {
  const Automorphism phi = rauzy();
  const Automorphism p3 = power(phi, 3);
  CHECK(verify_inverse(p3).ok);
  CHECK(p3.image(1) == iterate(phi, Word::generator(1), 3));
  const Automorphism id = compose(phi, phi.inverse());
  for (int g = 1; g <= 3; ++g) {
    CHECK(id.image(g) == Word::generator(g));
  }
  const Automorphism pm2 = power(phi, -2);
  CHECK(pm2.image(1) == iterate(phi, Word::generator(1), -2));
  CHECK(power(phi, 0).images() == Automorphism::identity(3).images());
}

TEST_CASE("length cap raises LengthOverflow") {
  const Automorphism phi = Automorphism::parse(
      "a -> ab\nb -> ac\nc -> a\ninverse:\na -> c\nb -> C a\nc -> C b\n", 100);
  CHECK(iterate(phi, Word::generator(1), 7).size() == 81);
  CHECK_THROWS_AS(iterate(phi, Word::generator(1), 9), LengthOverflow);
  try {
    iterate(phi, Word::generator(1), 12);
  } catch (const LengthOverflow& e) {
    CHECK(e.cap() == 100);
  }
}

TEST_CASE("rank mismatch") {
  CHECK_THROWS_AS(apply(fib(), Word::parse("c")), RankMismatch);
}

TEST_CASE("homotopy representative is cyclically reduced and conjugate") {
  const Automorphism phi = fib();
  const Word h = Word::parse("b a B");
  const Word rep = homotopy_rep(phi, h, 3, Direction::forward);
  CHECK(rep == cyclic_reduce(iterate(phi, h, 3)).core);
  // conjugate to phi^3(a) = abaab, already cyclically reduced
  CHECK(rep.size() == 5);
  CHECK(homotopy_rep(phi, h, 2, Direction::backward) == cyclic_reduce(iterate(phi, h, -2)).core);
  CHECK_THROWS_AS(homotopy_rep(phi, Word(), 1, Direction::forward), MalformedInput);
}

TEST_CASE("stretch check and ratios") {
  CHECK(Ratio::parse("3/2").num == 3);
  CHECK(Ratio::parse("1.5").value() == doctest::Approx(1.5));
  CHECK(Ratio::parse("2").value() == 2.0);
  CHECK_THROWS_AS(Ratio::parse("x"), MalformedInput);
  const Automorphism phi = fib();
  // |phi^4(a)| = 8
  CHECK(stretch_check(phi, Word::parse("a"), 4, Ratio{7, 1}));
  CHECK_FALSE(stretch_check(phi, Word::parse("a"), 4, Ratio{8, 1}));
  CHECK_FALSE(stretch_check(Automorphism::identity(2), Word::parse("ab"), 5, Ratio{1, 1}));
}
