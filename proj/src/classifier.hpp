#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "matrix.hpp"
#include "types.hpp"

namespace pdclass {

// Shared supervised contract. predict_proba returns one row per sample with
// kNumClasses nonnegative entries summing to 1; predict is its argmax with
// ties resolved to the lowest class code. Fitting is deterministic given
// (x, y, seed).
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual void fit(const Matrix& x, const std::vector<int>& y,
                   std::uint64_t seed) = 0;
  virtual Matrix predict_proba(const Matrix& x) const = 0;
  virtual const char* kind() const = 0;

  std::vector<int> predict(const Matrix& x) const;

 protected:
  static int argmax_class(std::span<const double> proba);
};

}  // namespace pdclass
