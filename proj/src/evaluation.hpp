#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "classifier.hpp"
#include "features.hpp"

namespace pdclass {

struct SplitSpec {
  double train_fraction = 0.6;
  bool stratified = true;
  int trials = 100;
  std::uint64_t master_seed = 0;
};

// Disjoint, exhaustive (train, validation) row index sets, both ascending.
// Stratified: per-class train count = round(fraction * class count), kept
// inside [1, count - 1]; classes with fewer than 2 samples are an error.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& y, double fraction, std::uint64_t seed);

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> random_split(
    std::size_t n, double fraction, std::uint64_t seed);

using ConfusionMatrix =
    std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;

struct Score {
  double accuracy = 0.0;
  std::array<double, kNumClasses> recall{};
  std::array<double, kNumClasses> precision{};
  // False when the class was never predicted; its precision is 0 then.
  std::array<bool, kNumClasses> class_predicted{};
  ConfusionMatrix confusion{};
};

// confusion[t][p] counts samples of truth t predicted as p.
Score score(const std::vector<int>& truth, const std::vector<int>& predicted);

struct EvalReport {
  std::string model;
  std::string features;
  int trials = 0;
  double train_fraction = 0.0;
  bool stratified = true;
  std::uint64_t master_seed = 0;
  std::size_t samples = 0;

  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  std::array<double, kNumClasses> recall_mean{};
  std::array<double, kNumClasses> recall_std{};
  std::array<double, kNumClasses> precision_mean{};
  std::array<double, kNumClasses> precision_std{};
  // Trials in which the class was never predicted (precision counted as 0).
  std::array<int, kNumClasses> never_predicted{};
  ConfusionMatrix confusion{};  // summed over trials
  std::vector<double> trial_accuracy;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>()>;

// Repeated split/fit/score protocol. Every trial derives its own split and
// fit seeds from (master_seed, trial index), so reports are reproducible
// end to end. Standard deviations are population (divisor n).
EvalReport run_trials(const ClassifierFactory& make_model,
                      const std::string& model_name,
                      const FeatureMatrix& features, const SplitSpec& split);

// Machine-readable form (JSON, sorted keys, stable float formatting).
std::string report_json(const EvalReport& report);

// Table mirroring the per-type recall/precision layout plus total accuracy.
std::string report_table(const EvalReport& report);

}  // namespace pdclass
