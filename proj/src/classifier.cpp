#include "classifier.hpp"

namespace pdclass {

int Classifier::argmax_class(std::span<const double> proba) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(proba.size()); ++k) {
    if (proba[k] > proba[best]) best = k;
  }
  return best;
}

std::vector<int> Classifier::predict(const Matrix& x) const {
  const Matrix proba = predict_proba(x);
  std::vector<int> labels(proba.rows());
  for (std::size_t i = 0; i < proba.rows(); ++i) {
    labels[i] = argmax_class(proba.row(i));
  }
  return labels;
}

}  // namespace pdclass
