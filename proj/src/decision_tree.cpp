#include "decision_tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "types.hpp"

namespace pdclass {

namespace {

int majority_class(const std::array<std::size_t, kNumClasses>& counts) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return best;
}

double gini(const std::array<std::size_t, kNumClasses>& counts,
            std::size_t total) {
  double impurity = 1.0;
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t c : counts) {
    const double frac = static_cast<double>(c) * inv;
    impurity -= frac * frac;
  }
  return impurity;
}

// Midpoint between two distinct sorted values, nudged down if rounding
// would put the upper value on the left side.
double split_point(double lo, double hi) {
  double mid = lo + (hi - lo) * 0.5;
  if (mid >= hi) mid = lo;
  return mid;
}

}  // namespace

void ClassificationTree::fit(const Matrix& x, const std::vector<int>& y,
                             std::span<const std::size_t> sample_idx,
                             int max_depth, int min_leaf,
                             int features_per_split, Rng& rng) {
  nodes_.clear();
  std::vector<std::size_t> idx(sample_idx.begin(), sample_idx.end());
  build(x, y, idx, 0, idx.size(), 0, max_depth, min_leaf, features_per_split,
        rng);
}

int ClassificationTree::build(const Matrix& x, const std::vector<int>& y,
                              std::vector<std::size_t>& idx, std::size_t begin,
                              std::size_t end, int depth, int max_depth,
                              int min_leaf, int features_per_split, Rng& rng) {
  const std::size_t n = end - begin;
  std::array<std::size_t, kNumClasses> counts{};
  for (std::size_t i = begin; i < end; ++i) counts[y[idx[i]]]++;

  const bool pure =
      *std::max_element(counts.begin(), counts.end()) == n;
  const bool depth_capped = max_depth > 0 && depth >= max_depth;

  const int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  if (pure || depth_capped || n < 2 * static_cast<std::size_t>(min_leaf)) {
    nodes_[node_id].leaf_class = majority_class(counts);
    return node_id;
  }

  const std::size_t d = x.cols();
  std::vector<std::size_t> candidates(d);
  std::iota(candidates.begin(), candidates.end(), 0);
  std::size_t n_candidates = d;
  if (features_per_split > 0 &&
      static_cast<std::size_t>(features_per_split) < d) {
    n_candidates = features_per_split;
    for (std::size_t i = 0; i < n_candidates; ++i) {
      std::swap(candidates[i], candidates[i + rng.below(d - i)]);
    }
  }

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_impurity = std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, int>> column(n);
  for (std::size_t ci = 0; ci < n_candidates; ++ci) {
    const std::size_t f = candidates[ci];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = idx[begin + i];
      column[i] = {x.at(row, f), y[row]};
    }
    std::sort(column.begin(), column.end());

    std::array<std::size_t, kNumClasses> left{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left[column[i].second]++;
      if (column[i].first == column[i + 1].first) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf) ||
          n_right < static_cast<std::size_t>(min_leaf)) {
        continue;
      }
      std::array<std::size_t, kNumClasses> right{};
      for (int k = 0; k < kNumClasses; ++k) right[k] = counts[k] - left[k];
      const double impurity =
          (static_cast<double>(n_left) * gini(left, n_left) +
           static_cast<double>(n_right) * gini(right, n_right)) /
          static_cast<double>(n);
      if (impurity < best_impurity) {
        best_impurity = impurity;
        best_feature = static_cast<int>(f);
        best_threshold = split_point(column[i].first, column[i + 1].first);
      }
    }
  }

  if (best_feature < 0) {
    nodes_[node_id].leaf_class = majority_class(counts);
    return node_id;
  }

  const auto split_at = std::partition(
      idx.begin() + begin, idx.begin() + end, [&](std::size_t row) {
        return x.at(row, best_feature) <= best_threshold;
      });
  const std::size_t mid = static_cast<std::size_t>(split_at - idx.begin());

  nodes_[node_id].feature = best_feature;
  nodes_[node_id].threshold = best_threshold;
  const int left_id = build(x, y, idx, begin, mid, depth + 1, max_depth,
                            min_leaf, features_per_split, rng);
  const int right_id = build(x, y, idx, mid, end, depth + 1, max_depth,
                             min_leaf, features_per_split, rng);
  nodes_[node_id].left = left_id;
  nodes_[node_id].right = right_id;
  return node_id;
}

int ClassificationTree::predict_class(std::span<const double> row) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    node = row[nodes_[node].feature] <= nodes_[node].threshold
               ? nodes_[node].left
               : nodes_[node].right;
  }
  return nodes_[node].leaf_class;
}

void RegressionTree::fit(const Matrix& x, const std::vector<double>& targets,
                         int max_depth, int min_leaf) {
  nodes_.clear();
  leaf_of_sample_.assign(targets.size(), -1);
  std::vector<std::size_t> idx(targets.size());
  std::iota(idx.begin(), idx.end(), 0);
  build(x, targets, idx, 0, idx.size(), 0, max_depth, min_leaf);
}

int RegressionTree::build(const Matrix& x, const std::vector<double>& targets,
                          std::vector<std::size_t>& idx, std::size_t begin,
                          std::size_t end, int depth, int max_depth,
                          int min_leaf) {
  const std::size_t n = end - begin;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double t = targets[idx[i]];
    sum += t;
    sum_sq += t * t;
  }
  const double mean = sum / static_cast<double>(n);
  const double sse = sum_sq - sum * mean;

  const int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  const bool depth_capped = max_depth > 0 && depth >= max_depth;
  if (depth_capped || n < 2 * static_cast<std::size_t>(min_leaf) ||
      sse <= 1e-24) {
    nodes_[node_id].feature = -1;
    nodes_[node_id].leaf_value = mean;
    for (std::size_t i = begin; i < end; ++i) {
      leaf_of_sample_[idx[i]] = node_id;
    }
    return node_id;
  }

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_sse = sse - 1e-24;

  std::vector<std::pair<double, double>> column(n);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = idx[begin + i];
      column[i] = {x.at(row, f), targets[row]};
    }
    std::sort(column.begin(), column.end());

    double left_sum = 0.0;
    double left_sq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += column[i].second;
      left_sq += column[i].second * column[i].second;
      if (column[i].first == column[i + 1].first) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf) ||
          n_right < static_cast<std::size_t>(min_leaf)) {
        continue;
      }
      const double right_sum = sum - left_sum;
      const double right_sq = sum_sq - left_sq;
      const double split_sse =
          (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
          (right_sq - right_sum * right_sum / static_cast<double>(n_right));
      if (split_sse < best_sse) {
        best_sse = split_sse;
        best_feature = static_cast<int>(f);
        best_threshold = split_point(column[i].first, column[i + 1].first);
      }
    }
  }

  if (best_feature < 0) {
    nodes_[node_id].feature = -1;
    nodes_[node_id].leaf_value = mean;
    for (std::size_t i = begin; i < end; ++i) {
      leaf_of_sample_[idx[i]] = node_id;
    }
    return node_id;
  }

  const auto split_at = std::partition(
      idx.begin() + begin, idx.begin() + end, [&](std::size_t row) {
        return x.at(row, best_feature) <= best_threshold;
      });
  const std::size_t mid = static_cast<std::size_t>(split_at - idx.begin());

  nodes_[node_id].feature = best_feature;
  nodes_[node_id].threshold = best_threshold;
  const int left_id =
      build(x, targets, idx, begin, mid, depth + 1, max_depth, min_leaf);
  const int right_id =
      build(x, targets, idx, mid, end, depth + 1, max_depth, min_leaf);
  nodes_[node_id].left = left_id;
  nodes_[node_id].right = right_id;
  return node_id;
}

double RegressionTree::predict_value(std::span<const double> row) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    node = row[nodes_[node].feature] <= nodes_[node].threshold
               ? nodes_[node].left
               : nodes_[node].right;
  }
  return nodes_[node].leaf_value;
}

}  // namespace pdclass
