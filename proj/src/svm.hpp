#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "classifier.hpp"
#include "rng.hpp"
#include "standardizer.hpp"

namespace pdclass {

enum class KernelKind { Rbf = 0, Linear = 1 };

const char* kernel_name(KernelKind kind);
KernelKind parse_kernel(const std::string& name);

struct SvmConfig {
  KernelKind kernel = KernelKind::Rbf;
  double c = 1.0;
  double gamma = 0.0;  // 0 = auto: 1 / (d * var of standardized inputs)
  double tolerance = 1e-3;
  std::size_t max_steps = 100000;
  bool fuzzy = false;
};

double kernel_value(std::span<const double> a, std::span<const double> b,
                    KernelKind kind, double gamma);

// Symmetric Gram matrix over the rows of x.
Matrix kernel_matrix(const Matrix& x, KernelKind kind, double gamma);

// Membership weight per sample: 1 minus the distance to its own class
// centroid over that class's radius (max distance, plus 1e-6). Always in
// (0, 1]; a singleton class gets weight 1.
std::vector<double> fuzzy_weights(const Matrix& x, const std::vector<int>& y);

// Soft-margin dual solution for one binary problem. Decision value of
// training row i is sum_j alpha[j]*y[j]*k(i,j) + bias.
struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;
  std::size_t steps = 0;
};

// Sequential minimal optimization over a precomputed kernel matrix.
// y entries are +1/-1; box[i] is the upper bound for alpha[i]. Pairwise
// updates keep sum(alpha_i * y_i) at zero. Throws NumericError with
// violation counts if the step budget runs out before the KKT conditions
// hold within `tolerance`.
SmoResult solve_smo(const Matrix& kmat, const std::vector<int>& y,
                    const std::vector<double>& box, double tolerance,
                    std::size_t max_steps, Rng& rng);

// Maximum-likelihood sigmoid fit p(y=+1|f) = 1/(1+exp(a*f+b)) on decision
// values, with prior-smoothed targets. Returns {a, b}.
std::pair<double, double> fit_platt_sigmoid(std::span<const double> decision,
                                            std::span<const int> y);

double platt_probability(double decision, double a, double b);

// One-vs-rest binary: support vectors live in standardized feature space.
struct SvmBinary {
  bool present = false;
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i per support vector
  double bias = 0.0;
  double platt_a = 0.0;
  double platt_b = 0.0;
};

// One-vs-rest soft-margin SVM with Platt-calibrated, renormalized
// probabilities. With config.fuzzy set, per-sample boxes shrink to
// C * fuzzy_weights (standardized-space distances).
class SupportVectorMachine : public Classifier {
 public:
  SupportVectorMachine() = default;
  explicit SupportVectorMachine(SvmConfig config) : config_(config) {}

  void fit(const Matrix& x, const std::vector<int>& y,
           std::uint64_t seed) override;

  // Same training path with caller-supplied membership weights in (0, 1].
  void fit_weighted(const Matrix& x, const std::vector<int>& y,
                    std::uint64_t seed, const std::vector<double>& weights);

  Matrix predict_proba(const Matrix& x) const override;
  const char* kind() const override { return config_.fuzzy ? "fsvm" : "svm"; }

  // Per-class decision values on raw inputs; absent classes give 0.
  Matrix decision_values(const Matrix& x) const;

  const SvmConfig& config() const { return config_; }
  double gamma_used() const { return gamma_; }
  const Standardizer& standardizer() const { return scaler_; }
  const std::array<SvmBinary, kNumClasses>& binaries() const {
    return binaries_;
  }

  void set_state(Standardizer scaler, double gamma,
                 std::array<SvmBinary, kNumClasses> binaries);

 private:
  void fit_internal(const Matrix& z, const std::vector<int>& y,
                    std::uint64_t seed, const std::vector<double>& weights);

  SvmConfig config_;
  Standardizer scaler_;
  double gamma_ = 0.0;
  std::array<SvmBinary, kNumClasses> binaries_;
  bool fitted_ = false;
};

}  // namespace pdclass
