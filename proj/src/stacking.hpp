#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "classifier.hpp"
#include "gradient_boosting.hpp"
#include "logistic_regression.hpp"
#include "random_forest.hpp"
#include "svm.hpp"

namespace pdclass {

// One configured learner. The seed offset separates the random streams of
// the specs inside a stacking config.
struct ClassifierSpec {
  std::variant<LrConfig, RfConfig, SvmConfig, GbConfig> config = RfConfig{};
  std::uint64_t seed_offset = 0;
};

// lr | rf | svm | fsvm | gb
const char* spec_kind(const ClassifierSpec& spec);

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

struct StackingConfig {
  std::vector<ClassifierSpec> level_one;
  ClassifierSpec meta;
  bool use_probabilities = true;
  bool include_original = true;
  int oof_folds = 5;
};

// RBF SVM, linear SVM, logistic regression and random forest feeding a
// random-forest meta-classifier on probabilities plus original features.
StackingConfig default_stacking_config();

// Two-level ensemble. The meta-classifier trains on out-of-fold level-one
// outputs (stratified folds), never on in-sample predictions; the level-one
// models used at inference are refitted on the full training data.
class StackingModel : public Classifier {
 public:
  using Factory =
      std::function<std::unique_ptr<Classifier>(const ClassifierSpec&)>;

  explicit StackingModel(StackingConfig config = default_stacking_config())
      : StackingModel(std::move(config), make_classifier) {}
  StackingModel(StackingConfig config, Factory factory)
      : config_(std::move(config)), factory_(std::move(factory)) {}

  void fit(const Matrix& x, const std::vector<int>& y,
           std::uint64_t seed) override;
  Matrix predict_proba(const Matrix& x) const override;
  const char* kind() const override { return "stack"; }

  // Columns produced per level-one model times model count, plus the
  // original width when included.
  std::size_t meta_width() const;

  const StackingConfig& config() const { return config_; }
  const std::vector<std::unique_ptr<Classifier>>& level_one_models() const {
    return models_;
  }
  const Classifier& meta_model() const { return *meta_; }

  // Fit diagnostics: fold index per training sample and the assembled
  // out-of-fold meta-training matrix. Empty on a loaded model.
  const std::vector<int>& fold_of() const { return fold_of_; }
  const Matrix& oof_features() const { return oof_; }

  void set_state(std::vector<std::unique_ptr<Classifier>> level_one,
                 std::unique_ptr<Classifier> meta, std::size_t input_width);

 private:
  Matrix assemble(const Matrix& x) const;

  StackingConfig config_;
  Factory factory_;
  std::vector<std::unique_ptr<Classifier>> models_;
  std::unique_ptr<Classifier> meta_;
  std::vector<int> fold_of_;
  Matrix oof_;
  std::size_t input_width_ = 0;
  bool fitted_ = false;
};

}  // namespace pdclass
