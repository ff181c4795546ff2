#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace pdclass {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf_class = -1;    // classification trees
  double leaf_value = 0;  // regression trees
};

// Greedy binary CART classifier: Gini impurity splits over a random feature
// subset per node, midpoint thresholds, majority-class leaves (ties to the
// lowest class code).
class ClassificationTree {
 public:
  // max_depth 0 means unbounded. features_per_split 0 means all features.
  void fit(const Matrix& x, const std::vector<int>& y,
           std::span<const std::size_t> sample_idx, int max_depth,
           int min_leaf, int features_per_split, Rng& rng);

  int predict_class(std::span<const double> row) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  void set_nodes(std::vector<TreeNode> nodes) { nodes_ = std::move(nodes); }

 private:
  int build(const Matrix& x, const std::vector<int>& y,
            std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
            int depth, int max_depth, int min_leaf, int features_per_split,
            Rng& rng);

  std::vector<TreeNode> nodes_;
};

// CART regressor minimizing squared error; every feature is inspected at
// every node. Leaf values start as means and may be overwritten by the
// caller (boosting installs its own leaf estimates).
class RegressionTree {
 public:
  void fit(const Matrix& x, const std::vector<double>& targets, int max_depth,
           int min_leaf);

  double predict_value(std::span<const double> row) const;

  // Leaf node index each training row fell into (filled during fit).
  const std::vector<int>& leaf_of_sample() const { return leaf_of_sample_; }

  std::vector<TreeNode>& nodes() { return nodes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  void set_nodes(std::vector<TreeNode> nodes) { nodes_ = std::move(nodes); }

 private:
  int build(const Matrix& x, const std::vector<double>& targets,
            std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
            int depth, int max_depth, int min_leaf);

  std::vector<TreeNode> nodes_;
  std::vector<int> leaf_of_sample_;
};

}  // namespace pdclass
