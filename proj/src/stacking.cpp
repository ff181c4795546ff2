#include "stacking.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>

#include "errors.hpp"
#include "rng.hpp"

namespace pdclass {

const char* spec_kind(const ClassifierSpec& spec) {
  if (std::holds_alternative<LrConfig>(spec.config)) return "lr";
  if (std::holds_alternative<RfConfig>(spec.config)) return "rf";
  if (std::holds_alternative<GbConfig>(spec.config)) return "gb";
  return std::get<SvmConfig>(spec.config).fuzzy ? "fsvm" : "svm";
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  return std::visit(
      [](const auto& config) -> std::unique_ptr<Classifier> {
        using T = std::decay_t<decltype(config)>;
        if constexpr (std::is_same_v<T, LrConfig>) {
          return std::make_unique<LogisticRegression>(config);
        } else if constexpr (std::is_same_v<T, RfConfig>) {
          return std::make_unique<RandomForest>(config);
        } else if constexpr (std::is_same_v<T, SvmConfig>) {
          return std::make_unique<SupportVectorMachine>(config);
        } else {
          return std::make_unique<GradientBoosting>(config);
        }
      },
      spec.config);
}

StackingConfig default_stacking_config() {
  StackingConfig config;
  SvmConfig rbf;
  SvmConfig linear;
  linear.kernel = KernelKind::Linear;
  config.level_one = {
      ClassifierSpec{rbf, 0},
      ClassifierSpec{linear, 1},
      ClassifierSpec{LrConfig{}, 2},
      ClassifierSpec{RfConfig{}, 3},
  };
  config.meta = ClassifierSpec{RfConfig{}, 4};
  return config;
}

std::size_t StackingModel::meta_width() const {
  const std::size_t block = config_.use_probabilities ? kNumClasses : 1;
  return block * config_.level_one.size() +
         (config_.include_original ? input_width_ : 0);
}

void StackingModel::fit(const Matrix& x, const std::vector<int>& y,
                        std::uint64_t seed) {
  if (config_.level_one.empty()) {
    throw ValidationError("stacking needs at least one level-one classifier");
  }
  if (config_.oof_folds < 2) {
    throw ValidationError("fold count must be at least 2");
  }
  if (x.rows() == 0) throw ValidationError("training data is empty");
  if (y.size() != x.rows()) {
    throw ValidationError("label count does not match row count");
  }

  const std::size_t n = x.rows();
  const std::size_t folds = static_cast<std::size_t>(config_.oof_folds);
  std::array<std::size_t, kNumClasses> counts{};
  for (int label : y) counts[label]++;
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (std::size_t c : counts) {
    if (c > 0) smallest = std::min(smallest, c);
  }
  if (smallest < folds) {
    char msg[96];
    std::snprintf(msg, sizeof(msg),
                  "fold count %zu exceeds smallest class count %zu", folds,
                  smallest);
    throw ValidationError(msg);
  }

  input_width_ = x.cols();
  fold_of_.assign(n, 0);
  Rng fold_rng(derive_seed(seed, 0xf01d));
  for (int k = 0; k < kNumClasses; ++k) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] == k) members.push_back(i);
    }
    fold_rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) {
      fold_of_[members[j]] = static_cast<int>(j % folds);
    }
  }

  const std::size_t block = config_.use_probabilities ? kNumClasses : 1;
  oof_ = Matrix(n, meta_width());

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  std::vector<int> train_y;
  for (std::size_t f = 0; f < folds; ++f) {
    train_idx.clear();
    test_idx.clear();
    train_y.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of_[i] == static_cast<int>(f)) {
        test_idx.push_back(i);
      } else {
        train_idx.push_back(i);
        train_y.push_back(y[i]);
      }
    }
    const Matrix x_train = x.take_rows(train_idx);
    const Matrix x_test = x.take_rows(test_idx);

    for (std::size_t j = 0; j < config_.level_one.size(); ++j) {
      const ClassifierSpec& spec = config_.level_one[j];
      auto model = factory_(spec);
      model->fit(x_train, train_y,
                 derive_seed(derive_seed(seed, spec.seed_offset), f));
      if (config_.use_probabilities) {
        const Matrix proba = model->predict_proba(x_test);
        for (std::size_t r = 0; r < test_idx.size(); ++r) {
          for (std::size_t c = 0; c < kNumClasses; ++c) {
            oof_.at(test_idx[r], j * block + c) = proba.at(r, c);
          }
        }
      } else {
        const std::vector<int> pred = model->predict(x_test);
        for (std::size_t r = 0; r < test_idx.size(); ++r) {
          oof_.at(test_idx[r], j * block) = pred[r];
        }
      }
    }
  }
  if (config_.include_original) {
    const std::size_t base = block * config_.level_one.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < input_width_; ++c) {
        oof_.at(i, base + c) = x.at(i, c);
      }
    }
  }

  models_.clear();
  for (const ClassifierSpec& spec : config_.level_one) {
    auto model = factory_(spec);
    model->fit(x, y, derive_seed(derive_seed(seed, spec.seed_offset), folds));
    models_.push_back(std::move(model));
  }

  meta_ = factory_(config_.meta);
  meta_->fit(oof_, y,
             derive_seed(derive_seed(seed, config_.meta.seed_offset),
                         folds + 1));
  fitted_ = true;
}

Matrix StackingModel::assemble(const Matrix& x) const {
  const std::size_t block = config_.use_probabilities ? kNumClasses : 1;
  Matrix meta(x.rows(), meta_width());
  for (std::size_t j = 0; j < models_.size(); ++j) {
    if (config_.use_probabilities) {
      const Matrix proba = models_[j]->predict_proba(x);
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < kNumClasses; ++c) {
          meta.at(r, j * block + c) = proba.at(r, c);
        }
      }
    } else {
      const std::vector<int> pred = models_[j]->predict(x);
      for (std::size_t r = 0; r < x.rows(); ++r) {
        meta.at(r, j * block) = pred[r];
      }
    }
  }
  if (config_.include_original) {
    const std::size_t base = block * models_.size();
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < input_width_; ++c) {
        meta.at(r, base + c) = x.at(r, c);
      }
    }
  }
  return meta;
}

Matrix StackingModel::predict_proba(const Matrix& x) const {
  if (!fitted_) throw ValidationError("model is not fitted");
  if (x.cols() != input_width_ && x.rows() > 0) {
    char msg[96];
    std::snprintf(msg, sizeof(msg),
                  "feature width mismatch: model expects %zu columns, got %zu",
                  input_width_, x.cols());
    throw ValidationError(msg);
  }
  if (x.rows() == 0) return Matrix(0, kNumClasses);
  return meta_->predict_proba(assemble(x));
}

void StackingModel::set_state(
    std::vector<std::unique_ptr<Classifier>> level_one,
    std::unique_ptr<Classifier> meta, std::size_t input_width) {
  if (level_one.size() != config_.level_one.size() || !meta) {
    throw ValidationError("stacking state does not match its config");
  }
  models_ = std::move(level_one);
  meta_ = std::move(meta);
  input_width_ = input_width;
  fold_of_.clear();
  oof_ = Matrix();
  fitted_ = true;
}

}  // namespace pdclass
