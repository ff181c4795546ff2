#include "random_forest.hpp"

#include <array>
#include <cmath>

#include "errors.hpp"

namespace pdclass {

void RandomForest::fit(const Matrix& x, const std::vector<int>& y,
                       std::uint64_t seed) {
  if (x.rows() == 0) throw ValidationError("training data is empty");
  if (y.size() != x.rows()) {
    throw ValidationError("label count does not match row count");
  }
  if (config_.trees < 1) throw ValidationError("tree count must be positive");

  const std::size_t n = x.rows();
  const int features_per_split = static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(x.cols()))));

  trees_.assign(config_.trees, ClassificationTree());
  std::vector<std::size_t> bootstrap(n);
  for (int t = 0; t < config_.trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (std::size_t i = 0; i < n; ++i) bootstrap[i] = rng.below(n);
    trees_[t].fit(x, y, bootstrap, config_.max_depth, config_.min_leaf,
                  features_per_split, rng);
  }
}

Matrix RandomForest::predict_proba(const Matrix& x) const {
  if (trees_.empty()) throw ValidationError("model is not fitted");
  Matrix proba(x.rows(), kNumClasses);
  const double total = static_cast<double>(trees_.size());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::array<int, kNumClasses> votes{};
    for (const ClassificationTree& tree : trees_) {
      votes[tree.predict_class(x.row(r))]++;
    }
    for (int k = 0; k < kNumClasses; ++k) {
      proba.at(r, k) = votes[k] / total;
    }
  }
  return proba;
}

void RandomForest::set_state(std::vector<ClassificationTree> trees) {
  if (trees.empty()) throw ValidationError("forest state has no trees");
  trees_ = std::move(trees);
}

}  // namespace pdclass
