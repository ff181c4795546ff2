#pragma once

#include <vector>

#include "matrix.hpp"

namespace pdclass {

// Per-column centering and scaling fitted on training rows. Constant
// columns keep divisor 1 so they pass through after centering.
class Standardizer {
 public:
  void fit(const Matrix& x);
  Matrix transform(const Matrix& x) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

  void set_state(std::vector<double> mean, std::vector<double> scale) {
    mean_ = std::move(mean);
    scale_ = std::move(scale);
  }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

}  // namespace pdclass
