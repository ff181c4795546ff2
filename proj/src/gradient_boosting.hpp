#pragma once

#include <array>
#include <vector>

#include "classifier.hpp"
#include "decision_tree.hpp"

namespace pdclass {

struct GbConfig {
  int rounds = 100;
  int depth = 3;
  double learning_rate = 0.1;
};

// Multinomial-deviance boosting: each round fits one depth-limited
// regression tree per class to the softmax pseudo-residuals, then installs
// Newton leaf estimates. Scores start at zero, so zero rounds predicts
// uniform probabilities. Training is deterministic; the seed is unused.
class GradientBoosting : public Classifier {
 public:
  GradientBoosting() = default;
  explicit GradientBoosting(GbConfig config) : config_(config) {}

  void fit(const Matrix& x, const std::vector<int>& y,
           std::uint64_t seed) override;
  Matrix predict_proba(const Matrix& x) const override;
  const char* kind() const override { return "gb"; }

  const GbConfig& config() const { return config_; }
  // Mean negative log-likelihood before each round plus a final entry.
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  const std::vector<std::array<RegressionTree, kNumClasses>>& rounds() const {
    return rounds_;
  }

  void set_state(std::vector<std::array<RegressionTree, kNumClasses>> rounds);

 private:
  GbConfig config_;
  std::vector<std::array<RegressionTree, kNumClasses>> rounds_;
  std::vector<double> loss_trace_;
  bool fitted_ = false;
};

}  // namespace pdclass
