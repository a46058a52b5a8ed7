#include <doctest.h>

#include <cmath>
#include <random>

#include "lamina/automorphism.hpp"
#include "lamina/config.hpp"
#include "lamina/error.hpp"
#include "lamina/traintrack.hpp"
#include "oracles.hpp"

using namespace lamina;

namespace {

MarkedGraphMap rauzy_map() { return MarkedGraphMap::parse("a -> ab\nb -> ac\nc -> a\n"); }

MarkedGraphMap fib_map() { return MarkedGraphMap::parse("a -> ab\nb -> a\n"); }

// Transition matrix counted directly from the images.
std::vector<std::vector<std::int64_t>> count_matrix(const MarkedGraphMap& f) {
  const int n = f.edge_count();
  std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
  for (int j = 1; j <= n; ++j) {
    for (Letter x : f.image(Letter(j, false))) {
      ++m[x.generator() - 1][j - 1];
    }
  }
  return m;
}

MarkedGraphMap rose_power(const Automorphism& phi, int n) {
  return MarkedGraphMap::rose(power(phi, n));
}

}  // namespace

TEST_CASE("rose parsing and the automorphism rose agree") {
  const MarkedGraphMap f = rauzy_map();
  CHECK(f.is_rose());
  CHECK(f.rank() == 3);
  CHECK(f.is_positive());
  const Automorphism phi = Automorphism::parse(read_file(LAMINA_DATA_DIR "/rauzy.aut"));
  const MarkedGraphMap g = MarkedGraphMap::rose(phi);
  for (int e = 1; e <= 3; ++e) {
    CHECK(f.image(Letter(e, false)) == g.image(Letter(e, false)));
  }
  CHECK(f.image(Letter(1, true)).to_string() == "BA");
}

TEST_CASE("graph map with two vertices") {
  const MarkedGraphMap f = MarkedGraphMap::parse(read_file(LAMINA_DATA_DIR "/subdivided.map"));
  CHECK(f.vertex_count() == 2);
  CHECK(f.edge_count() == 3);
  CHECK(f.rank() == 2);
  const EdgePath xy = f.parse_path("x y");
  CHECK(f.to_word(xy).to_string() == "a");
  CHECK(f.to_word(apply_map(f, xy)).to_string() == "aba");
  CHECK(f.to_word(f.image(Letter(3, false))).to_string() == "a");
  CHECK(f.path_to_string(xy) == "x y");
  CHECK_THROWS_AS(f.parse_path("x b"), MalformedInput);
}

TEST_CASE("malformed maps are rejected") {
  CHECK_THROWS_AS(MarkedGraphMap::parse("vertices: v w\nedge x: v -> w\nedge y: w -> v\nvertex v -> v\n"
                                        "vertex w -> w\nx -> y\ny -> y\n"),
                  MalformedInput);
  CHECK_THROWS_AS(MarkedGraphMap::parse("a -> ab\n"), MalformedInput);
  CHECK_THROWS_AS(MarkedGraphMap::parse("a -> a A\nb -> b\n"), MalformedInput);
}

TEST_CASE("transition matrix counts edge crossings") {
  for (const MarkedGraphMap& f : {rauzy_map(), fib_map(),
                                  MarkedGraphMap::parse(read_file(LAMINA_DATA_DIR "/subdivided.map"))}) {
    const TransitionMatrix m = transition_matrix(f);
    const auto expected = count_matrix(f);
    for (int i = 0; i < f.edge_count(); ++i) {
      for (int j = 0; j < f.edge_count(); ++j) {
        CHECK(m.at(i, j) == expected[i][j]);
      }
    }
  }
  CHECK(transition_matrix(rauzy_map()).to_string() == "1 1 1\n1 0 0\n0 1 0\n");
}

TEST_CASE("matrix of an iterate is the matrix power") {
  const Automorphism rz = Automorphism::parse(read_file(LAMINA_DATA_DIR "/rauzy.aut"));
  const Automorphism fb = Automorphism::parse(read_file(LAMINA_DATA_DIR "/fib.aut"));
  for (const Automorphism& phi : {rz, fb}) {
    const TransitionMatrix m = transition_matrix(MarkedGraphMap::rose(phi));
    for (int n = 1; n <= 6; ++n) {
      CHECK(transition_matrix(rose_power(phi, n)) == m.power(n));
    }
  }
}

TEST_CASE("leaf segments have column-sum lengths") {
  const MarkedGraphMap f = rauzy_map();
  const TransitionMatrix m = transition_matrix(f);
  for (int n = 0; n <= 12; ++n) {
    const TransitionMatrix p = m.power(n);
    for (int e = 1; e <= 3; ++e) {
      CHECK(static_cast<std::int64_t>(leaf_segment(f, Letter(e, false), n).size()) ==
            p.column_sum(e - 1));
    }
  }
  CHECK(leaf_segment(f, Letter(1, false), 3).to_string() == "abacaba");
}

TEST_CASE("primitivity against the power scan") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<std::vector<int>> m(n, std::vector<int>(n));
    std::vector<std::int64_t> flat;
    for (auto& row : m) {
      for (int& x : row) {
        x = static_cast<int>(rng() % 3 == 0);
        flat.push_back(x);
      }
    }
    const Primitivity p = is_primitive(TransitionMatrix(n, flat));
    const oracle::PrimitiveScan s = oracle::scan_primitive(m);
    CHECK(p.primitive == s.primitive);
    if (s.primitive) {
      CHECK(p.witness_power == s.power);
    }
  }
  CHECK(is_primitive(transition_matrix(rauzy_map())).witness_power == 3);
  CHECK(is_primitive(transition_matrix(fib_map())).witness_power == 2);
  CHECK_FALSE(is_primitive(TransitionMatrix(2, {0, 1, 1, 0})).primitive);
}

TEST_CASE("Perron-Frobenius data") {
  const PerronFrobenius pf = pf_data(transition_matrix(rauzy_map()));
  CHECK(pf.eigenvalue == doctest::Approx(1.839286755214161).epsilon(1e-9));
  double sum = 0;
  for (double x : pf.eigenvector) {
    CHECK(x > 0);
    sum += x;
  }
  CHECK(sum == doctest::Approx(1.0));
  CHECK(pf_data(transition_matrix(fib_map())).eigenvalue ==
        doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-9));
  CHECK_THROWS_AS(pf_data(TransitionMatrix(2, {0, 1, 1, 0})), HypothesisViolation);
}

TEST_CASE("train-track check") {
  CHECK(check_train_track(rauzy_map()));
  const MarkedGraphMap folded = MarkedGraphMap::parse("a -> ab\nb -> Ba\n");
  CHECK_FALSE(check_train_track(folded));
  CHECK_THROWS_AS(apply_map(folded, folded.parse_path("a b")), NotATrainTrack);
  const Automorphism inv = Automorphism::parse(read_file(LAMINA_DATA_DIR "/rauzy.aut")).inverse();
  // f^3(b) = f(B c c) = A c C b C b folds
  CHECK_FALSE(check_train_track(MarkedGraphMap::rose(inv)));
}

TEST_CASE("periodic directions of the rauzy map") {
  const auto rays = periodic_directions(rauzy_map());
  REQUIRE(rays.size() == 4);
  CHECK(rays[0].direction == Letter(1, false));
  CHECK(rays[0].period == 1);
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(rays[i].period == 3);
  }
  CHECK(rays[1].direction == Letter(1, true));
  CHECK(rays[2].direction == Letter(2, true));
  CHECK(rays[3].direction == Letter(3, true));
}

TEST_CASE("eigenray prefixes are prefixes of high iterates") {
  const MarkedGraphMap f = rauzy_map();
  for (const EigenRay& r : periodic_directions(f)) {
    EdgePath far{r.direction};
    while (far.size() < 400) {
      for (int k = 0; k < r.period; ++k) {
        far = apply_map(f, far);
      }
    }
    for (std::size_t len : {1u, 5u, 40u, 300u}) {
      const EigenRayPrefix p = eigenray_prefix(f, r, len);
      CHECK_FALSE(p.degenerate);
      CHECK(p.path.size() == len);
      CHECK(far.starts_with(p.path));
    }
  }
}

TEST_CASE("eigenray of a non-expanding direction is flagged degenerate") {
  const MarkedGraphMap f = MarkedGraphMap::parse("a -> a\nb -> ba\n");
  const auto rays = periodic_directions(f);
  bool saw = false;
  for (const EigenRay& r : rays) {
    if (r.direction == Letter(1, false)) {
      saw = true;
      const EigenRayPrefix p = eigenray_prefix(f, r, 10);
      CHECK(p.degenerate);
      CHECK(p.path.size() == 1);
    }
  }
  CHECK(saw);
  CHECK(diagonal_pairs(f).degenerate);
}

TEST_CASE("diagonal pairs pair up directions at a vertex") {
  const DiagonalPairs d = diagonal_pairs(rauzy_map());
  CHECK_FALSE(d.degenerate);
  CHECK(d.pairs.size() == 6);
  for (const auto& p : d.pairs) {
    CHECK(p.common_period == 3);
  }
}

TEST_CASE("leaf language: parallel equals serial, tribonacci complexity") {
  const MarkedGraphMap f = rauzy_map();
  for (std::size_t len = 1; len <= 8; ++len) {
    const LeafLanguage par = leaf_language(f, len, 14);
    const LeafLanguage ser = leaf_language_serial(f, len, 14);
    CHECK(par.factors == ser.factors);
    CHECK(par.stabilized_at == ser.stabilized_at);
    CHECK(par.stable);
    // 2L + 1 positive factors, plus their reverses
    CHECK(par.factors.size() == 2 * (2 * len + 1));
  }
}
