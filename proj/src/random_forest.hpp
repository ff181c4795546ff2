#pragma once

#include <vector>

#include "classifier.hpp"
#include "decision_tree.hpp"

namespace pdclass {

struct RfConfig {
  int trees = 100;
  int max_depth = 0;  // 0 = unbounded
  int min_leaf = 1;
};

// Bagged CART ensemble: each tree trains on a bootstrap resample and splits
// on ceil(sqrt(d)) randomly chosen features per node. Class probabilities
// are tree vote fractions.
class RandomForest : public Classifier {
 public:
  RandomForest() = default;
  explicit RandomForest(RfConfig config) : config_(config) {}

  void fit(const Matrix& x, const std::vector<int>& y,
           std::uint64_t seed) override;
  Matrix predict_proba(const Matrix& x) const override;
  const char* kind() const override { return "rf"; }

  const RfConfig& config() const { return config_; }
  const std::vector<ClassificationTree>& trees() const { return trees_; }
  void set_state(std::vector<ClassificationTree> trees);

 private:
  RfConfig config_;
  std::vector<ClassificationTree> trees_;
};

}  // namespace pdclass
