#pragma once

#include "classifier.hpp"
#include "standardizer.hpp"

namespace pdclass {

struct LrConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2_penalty = 1e-4;
};

// Multinomial softmax loss helpers on raw (unstandardized-agnostic) inputs.
// `weights` is kNumClasses x (d + 1) with the intercept in the last column;
// the intercept is excluded from the L2 penalty. Loss is the mean negative
// log-likelihood plus 0.5 * l2 * ||weights||^2.
double lr_loss(const Matrix& weights, const Matrix& x,
               const std::vector<int>& y, double l2_penalty);
Matrix lr_gradient(const Matrix& weights, const Matrix& x,
                   const std::vector<int>& y, double l2_penalty);

// Full-batch gradient descent from zero weights with step halving, so the
// regularized loss is non-increasing across iterations.
class LogisticRegression : public Classifier {
 public:
  explicit LogisticRegression(LrConfig config = {}) : config_(config) {}

  void fit(const Matrix& x, const std::vector<int>& y,
           std::uint64_t seed) override;
  Matrix predict_proba(const Matrix& x) const override;
  const char* kind() const override { return "lr"; }

  const LrConfig& config() const { return config_; }
  const Standardizer& standardizer() const { return scaler_; }
  const Matrix& weights() const { return weights_; }
  const std::vector<double>& loss_trace() const { return loss_trace_; }

  void set_state(Standardizer scaler, Matrix weights);

 private:
  LrConfig config_;
  Standardizer scaler_;
  Matrix weights_;  // kNumClasses x (d + 1)
  std::vector<double> loss_trace_;
  bool fitted_ = false;
};

}  // namespace pdclass
