#include "logistic_regression.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace pdclass {

namespace {

// Row scores -> probabilities, in place, numerically stabilized.
void softmax_rows(Matrix& scores) {
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    auto row = scores.row(i);
    double peak = row[0];
    for (double v : row) peak = std::max(peak, v);
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

Matrix scores_with_bias(const Matrix& weights, const Matrix& x) {
  const std::size_t d = x.cols();
  Matrix scores(x.rows(), kNumClasses);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (int k = 0; k < kNumClasses; ++k) {
      double s = weights.at(k, d);
      for (std::size_t j = 0; j < d; ++j) s += weights.at(k, j) * row[j];
      scores.at(i, k) = s;
    }
  }
  return scores;
}

}  // namespace

double lr_loss(const Matrix& weights, const Matrix& x,
               const std::vector<int>& y, double l2_penalty) {
  Matrix proba = scores_with_bias(weights, x);
  softmax_rows(proba);
  double nll = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    nll -= std::log(std::max(proba.at(i, y[i]), 1e-300));
  }
  nll /= static_cast<double>(x.rows());

  double penalty = 0.0;
  for (int k = 0; k < kNumClasses; ++k) {
    for (std::size_t j = 0; j < x.cols(); ++j) {  // intercept excluded
      penalty += weights.at(k, j) * weights.at(k, j);
    }
  }
  return nll + 0.5 * l2_penalty * penalty;
}

Matrix lr_gradient(const Matrix& weights, const Matrix& x,
                   const std::vector<int>& y, double l2_penalty) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Matrix proba = scores_with_bias(weights, x);
  softmax_rows(proba);

  Matrix grad(kNumClasses, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (int k = 0; k < kNumClasses; ++k) {
      const double err = proba.at(i, k) - (y[i] == k ? 1.0 : 0.0);
      for (std::size_t j = 0; j < d; ++j) grad.at(k, j) += err * row[j];
      grad.at(k, d) += err;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int k = 0; k < kNumClasses; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      grad.at(k, j) = grad.at(k, j) * inv_n + l2_penalty * weights.at(k, j);
    }
    grad.at(k, d) *= inv_n;
  }
  return grad;
}

void LogisticRegression::fit(const Matrix& x, const std::vector<int>& y,
                             std::uint64_t /*seed*/) {
  if (x.rows() == 0 || x.rows() != y.size()) {
    throw ValidationError("training matrix and labels must align");
  }
  if (std::set<int>(y.begin(), y.end()).size() < 2) {
    throw ValidationError("training data contains a single class");
  }

  scaler_.fit(x);
  const Matrix xs = scaler_.transform(x);

  weights_ = Matrix(kNumClasses, x.cols() + 1);
  loss_trace_.clear();
  loss_trace_.reserve(config_.iterations + 1);
  double loss = lr_loss(weights_, xs, y, config_.l2_penalty);
  loss_trace_.push_back(loss);

  double step = config_.learning_rate;
  for (int it = 0; it < config_.iterations; ++it) {
    const Matrix grad = lr_gradient(weights_, xs, y, config_.l2_penalty);

    Matrix candidate = weights_;
    double next_loss = loss;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      for (std::size_t i = 0; i < candidate.data().size(); ++i) {
        candidate.data()[i] = weights_.data()[i] - step * grad.data()[i];
      }
      next_loss = lr_loss(candidate, xs, y, config_.l2_penalty);
      if (next_loss <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent direction left at this scale

    weights_ = std::move(candidate);
    loss = next_loss;
    loss_trace_.push_back(loss);
  }
  fitted_ = true;
}

Matrix LogisticRegression::predict_proba(const Matrix& x) const {
  if (!fitted_) throw ValidationError("model is not fitted");
  Matrix proba = scores_with_bias(weights_, scaler_.transform(x));
  softmax_rows(proba);
  return proba;
}

void LogisticRegression::set_state(Standardizer scaler, Matrix weights) {
  scaler_ = std::move(scaler);
  weights_ = std::move(weights);
  fitted_ = true;
}

}  // namespace pdclass
