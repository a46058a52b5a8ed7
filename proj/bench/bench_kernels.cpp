// Serial reference vs OpenMP kernels: ball construction and leaf language.
// Usage: bench_kernels [radius] [repeats]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "lamina/ball.hpp"
#include "lamina/traintrack.hpp"

using namespace lamina;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int radius = argc > 1 ? std::atoi(argv[1]) : 6;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const Automorphism rauzy = Automorphism::parse(
      "a -> ab\nb -> ac\nc -> a\ninverse:\na -> c\nb -> C a\nc -> C b\n");
  std::printf("threads: %d\n", omp_get_max_threads());

  std::size_t ref_size = 0;
  std::size_t par_size = 0;
  const double ref = best_of(repeats, [&] { ref_size = build_ball_reference(rauzy, radius).size(); });
  const double par = best_of(repeats, [&] { par_size = build_ball(rauzy, radius).size(); });
  std::printf("ball R=%d rank 3: reference %.3f s, parallel %.3f s (%zu states%s)\n", radius, ref,
              par, par_size, ref_size == par_size ? "" : ", SIZE MISMATCH");

  const MarkedGraphMap f = MarkedGraphMap::rose(rauzy);
  std::size_t ser_n = 0;
  std::size_t par_n = 0;
  const double ser_t = best_of(repeats, [&] { ser_n = leaf_language_serial(f, 12, 18).factors.size(); });
  const double par_t = best_of(repeats, [&] { par_n = leaf_language(f, 12, 18).factors.size(); });
  std::printf("leaf language L=12 n=18: serial %.3f s, parallel %.3f s (%zu factors%s)\n", ser_t,
              par_t, par_n, ser_n == par_n ? "" : ", SIZE MISMATCH");
  return ref_size == par_size && ser_n == par_n ? 0 : 1;
}
