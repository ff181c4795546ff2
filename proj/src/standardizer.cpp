#include "standardizer.hpp"

#include <cmath>

#include "errors.hpp"

namespace pdclass {

void Standardizer::fit(const Matrix& x) {
  if (x.rows() == 0) throw ValidationError("standardizer needs at least one row");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  mean_.assign(d, 0.0);
  scale_.assign(d, 1.0);

  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) mean_[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) mean_[j] /= static_cast<double>(n);

  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - mean_[j];
      var[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    var[j] /= static_cast<double>(n);
    scale_[j] = var[j] > 1e-24 ? std::sqrt(var[j]) : 1.0;
  }
}

Matrix Standardizer::transform(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto src = x.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      dst[j] = (src[j] - mean_[j]) / scale_[j];
    }
  }
  return out;
}

}  // namespace pdclass
