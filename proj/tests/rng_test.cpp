#include <algorithm>
#include <vector>

#include <doctest.h>

#include "rng.hpp"

using namespace pdclass;

TEST_CASE("derived seeds are stable and distinct") {
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("uniform draws stay inside their interval") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("below produces indices under the bound") {
  Rng rng(2);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) hits[rng.below(5)]++;
  for (int h : hits) CHECK(h > 0);
}

TEST_CASE("shuffle permutes without losing elements") {
  Rng rng(3);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  auto shuffled = v;
  rng.shuffle(shuffled);
  auto sorted = shuffled;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == v);

  Rng rng_a(4);
  Rng rng_b(4);
  auto a = v;
  auto b = v;
  rng_a.shuffle(a);
  rng_b.shuffle(b);
  CHECK(a == b);
}
