#include <cmath>
#include <vector>

#include <doctest.h>

#include "errors.hpp"
#include "helpers.hpp"
#include "random_forest.hpp"
#include "rng.hpp"

using namespace pdclass;

namespace {

void fill_clusters(Matrix& x, std::vector<int>& y, Rng& rng,
                   std::size_t per_class, double spread) {
  x = Matrix(per_class * kNumClasses, 2);
  y.clear();
  std::size_t row = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      x.at(row, 0) = (k & 1) * 4.0 + rng.uniform(-spread, spread);
      x.at(row, 1) = (k >> 1) * 4.0 + rng.uniform(-spread, spread);
      y.push_back(k);
    }
  }
}

}  // namespace

TEST_CASE("forest learns separable clusters and votes probabilities") {
  Rng rng(6);
  Matrix x;
  std::vector<int> y;
  fill_clusters(x, y, rng, 20, 0.3);

  RandomForest forest(RfConfig{50, 0, 1});
  forest.fit(x, y, 1);
  CHECK(forest.trees().size() == 50);

  const auto pred = forest.predict(x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == y[i];
  CHECK(correct == pred.size());

  const Matrix proba = forest.predict_proba(x);
  CHECK(testutil::is_simplex(proba));
  // Probabilities are tree vote fractions.
  for (std::size_t r = 0; r < proba.rows(); ++r) {
    for (std::size_t c = 0; c < proba.cols(); ++c) {
      const double votes = proba.at(r, c) * 50.0;
      CHECK(std::abs(votes - std::round(votes)) < 1e-9);
    }
  }
}

TEST_CASE("forests are deterministic per seed") {
  Rng rng(7);
  Matrix x;
  std::vector<int> y;
  fill_clusters(x, y, rng, 15, 2.5);  // overlapping clusters

  RandomForest a(RfConfig{30, 0, 1});
  RandomForest b(RfConfig{30, 0, 1});
  RandomForest c(RfConfig{30, 0, 1});
  a.fit(x, y, 7);
  b.fit(x, y, 7);
  c.fit(x, y, 8);

  CHECK(a.predict_proba(x) == b.predict_proba(x));
  CHECK(a.predict_proba(x) != c.predict_proba(x));
}

TEST_CASE("forest state round trips") {
  Rng rng(9);
  Matrix x;
  std::vector<int> y;
  fill_clusters(x, y, rng, 10, 0.5);

  RandomForest forest(RfConfig{20, 0, 1});
  forest.fit(x, y, 2);

  RandomForest copy;
  copy.set_state(forest.trees());
  CHECK(copy.predict_proba(x) == forest.predict_proba(x));
  CHECK_THROWS_AS(copy.set_state({}), ValidationError);
}

TEST_CASE("single-class data yields certain votes") {
  Matrix x(6, 1);
  for (std::size_t i = 0; i < 6; ++i) x.at(i, 0) = static_cast<double>(i);
  RandomForest forest(RfConfig{10, 0, 1});
  forest.fit(x, std::vector<int>(6, 2), 1);

  const Matrix proba = forest.predict_proba(x);
  for (std::size_t r = 0; r < proba.rows(); ++r) {
    CHECK(proba.at(r, 2) == 1.0);
  }
}

TEST_CASE("forest validates its inputs") {
  RandomForest forest(RfConfig{0, 0, 1});
  Matrix x(3, 1, 1.0);
  CHECK_THROWS_AS(forest.fit(x, {0, 1, 2}, 1), ValidationError);

  RandomForest ok;
  CHECK_THROWS_AS(ok.fit(Matrix(), {}, 1), ValidationError);
  CHECK_THROWS_AS(ok.fit(x, {0, 1}, 1), ValidationError);
  CHECK_THROWS_AS(ok.predict_proba(x), ValidationError);
}
