#include <numeric>
#include <vector>

#include <doctest.h>

#include "decision_tree.hpp"

using namespace pdclass;

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

TEST_CASE("classification tree splits an obvious boundary") {
  Matrix x(8, 1);
  std::vector<int> y;
  for (std::size_t i = 0; i < 8; ++i) {
    x.at(i, 0) = i < 4 ? static_cast<double>(i) : static_cast<double>(i + 6);
    y.push_back(i < 4 ? 0 : 2);
  }

  ClassificationTree tree;
  Rng rng(1);
  tree.fit(x, y, all_rows(8), 0, 1, 0, rng);

  REQUIRE(!tree.nodes().empty());
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == doctest::Approx(6.5));  // midpoint 3..10
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(tree.predict_class(x.row(i)) == y[i]);
  }
}

TEST_CASE("leaf ties resolve to the lowest class code") {
  Matrix x(4, 1);
  for (std::size_t i = 0; i < 4; ++i) x.at(i, 0) = static_cast<double>(i);

  ClassificationTree tree;
  Rng rng(1);
  // min_leaf 4 forbids every split, forcing a single mixed leaf.
  tree.fit(x, {2, 1, 2, 1}, all_rows(4), 0, 4, 0, rng);
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.nodes()[0].feature == -1);
  CHECK(tree.nodes()[0].leaf_class == 1);

  ClassificationTree majority;
  majority.fit(x, {3, 0, 3, 3}, all_rows(4), 0, 4, 0, rng);
  CHECK(majority.nodes()[0].leaf_class == 3);
}

TEST_CASE("max depth bounds the tree") {
  Matrix x(8, 1);
  std::vector<int> y;
  for (std::size_t i = 0; i < 8; ++i) {
    x.at(i, 0) = static_cast<double>(i);
    y.push_back(static_cast<int>(i / 2));  // needs depth 2 for purity
  }

  ClassificationTree tree;
  Rng rng(1);
  tree.fit(x, y, all_rows(8), 1, 1, 0, rng);
  CHECK(tree.nodes().size() <= 3);

  ClassificationTree deep;
  deep.fit(x, y, all_rows(8), 0, 1, 0, rng);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(deep.predict_class(x.row(i)) == y[i]);
  }
}

TEST_CASE("tree state round trips through nodes") {
  Matrix x(6, 1);
  std::vector<int> y{0, 0, 1, 1, 2, 2};
  for (std::size_t i = 0; i < 6; ++i) x.at(i, 0) = static_cast<double>(i);
  ClassificationTree tree;
  Rng rng(5);
  tree.fit(x, y, all_rows(6), 0, 1, 0, rng);

  ClassificationTree copy;
  copy.set_nodes(tree.nodes());
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(copy.predict_class(x.row(i)) == tree.predict_class(x.row(i)));
  }
}

TEST_CASE("regression tree fits a step function") {
  Matrix x(8, 1);
  std::vector<double> targets;
  for (std::size_t i = 0; i < 8; ++i) {
    x.at(i, 0) = static_cast<double>(i);
    targets.push_back(i < 4 ? 1.0 : 5.0);
  }

  RegressionTree tree;
  tree.fit(x, targets, 3, 1);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(tree.predict_value(x.row(i)) == doctest::Approx(targets[i]));
  }

  REQUIRE(tree.leaf_of_sample().size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const int leaf = tree.leaf_of_sample()[i];
    CHECK(tree.nodes()[leaf].feature == -1);
    CHECK(tree.nodes()[leaf].leaf_value ==
          doctest::Approx(tree.predict_value(x.row(i))));
  }
}

TEST_CASE("regression leaves average their rows") {
  Matrix x(4, 1);
  x.at(0, 0) = 0.0;
  x.at(1, 0) = 1.0;
  x.at(2, 0) = 10.0;
  x.at(3, 0) = 11.0;

  RegressionTree tree;
  tree.fit(x, {1.0, 2.0, 10.0, 12.0}, 1, 2);
  CHECK(tree.predict_value(x.row(0)) == doctest::Approx(1.5));
  CHECK(tree.predict_value(x.row(3)) == doctest::Approx(11.0));
}
