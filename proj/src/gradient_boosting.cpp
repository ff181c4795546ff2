#include "gradient_boosting.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace pdclass {

namespace {

void softmax_rows(Matrix& scores) {
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    auto row = scores.row(r);
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : row) v /= total;
  }
}

double mean_nll(const Matrix& proba, const std::vector<int>& y) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total -= std::log(std::max(proba.at(i, y[i]), 1e-300));
  }
  return total / static_cast<double>(y.size());
}

}  // namespace

void GradientBoosting::fit(const Matrix& x, const std::vector<int>& y,
                           std::uint64_t seed) {
  (void)seed;
  if (x.rows() == 0) throw ValidationError("training data is empty");
  if (y.size() != x.rows()) {
    throw ValidationError("label count does not match row count");
  }
  if (config_.rounds < 0) throw ValidationError("round count must be >= 0");
  if (config_.learning_rate <= 0.0) {
    throw ValidationError("learning rate must be positive");
  }

  const std::size_t n = x.rows();
  constexpr double kShrink =
      static_cast<double>(kNumClasses - 1) / kNumClasses;

  Matrix scores(n, kNumClasses);
  rounds_.clear();
  rounds_.reserve(config_.rounds);
  loss_trace_.clear();
  std::vector<double> residual(n);

  for (int round = 0; round < config_.rounds; ++round) {
    Matrix proba = scores;
    softmax_rows(proba);
    loss_trace_.push_back(mean_nll(proba, y));

    rounds_.emplace_back();
    for (int k = 0; k < kNumClasses; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        residual[i] = (y[i] == k ? 1.0 : 0.0) - proba.at(i, k);
      }
      RegressionTree& tree = rounds_.back()[k];
      tree.fit(x, residual, config_.depth, 1);

      // Newton leaf estimate for the multinomial deviance.
      std::vector<double> num(tree.nodes().size(), 0.0);
      std::vector<double> den(tree.nodes().size(), 0.0);
      const std::vector<int>& leaf_of = tree.leaf_of_sample();
      for (std::size_t i = 0; i < n; ++i) {
        const double r = residual[i];
        num[leaf_of[i]] += r;
        den[leaf_of[i]] += std::abs(r) * (1.0 - std::abs(r));
      }
      for (std::size_t node = 0; node < tree.nodes().size(); ++node) {
        if (tree.nodes()[node].feature >= 0) continue;
        tree.nodes()[node].leaf_value =
            den[node] > 1e-12 ? kShrink * num[node] / den[node] : 0.0;
      }
      for (std::size_t i = 0; i < n; ++i) {
        scores.at(i, k) += config_.learning_rate *
                           tree.nodes()[leaf_of[i]].leaf_value;
      }
    }
  }

  Matrix proba = scores;
  softmax_rows(proba);
  loss_trace_.push_back(mean_nll(proba, y));
  fitted_ = true;
}

Matrix GradientBoosting::predict_proba(const Matrix& x) const {
  if (!fitted_) throw ValidationError("model is not fitted");
  Matrix scores(x.rows(), kNumClasses);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    for (const auto& round : rounds_) {
      for (int k = 0; k < kNumClasses; ++k) {
        scores.at(r, k) += config_.learning_rate * round[k].predict_value(row);
      }
    }
  }
  softmax_rows(scores);
  return scores;
}

void GradientBoosting::set_state(
    std::vector<std::array<RegressionTree, kNumClasses>> rounds) {
  rounds_ = std::move(rounds);
  fitted_ = true;
}

}  // namespace pdclass
