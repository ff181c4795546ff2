#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace pdclass {

namespace {

double population_std(double mean, double sum_sq, double n) {
  return std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
}

std::string format_pm(double mean, double std_dev, bool flag = false) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f +/- %.4f%s", mean, std_dev,
                flag ? "*" : " ");
  return buf;
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& y, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  Rng rng(seed);
  for (int k = 0; k < kNumClasses; ++k) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == k) members.push_back(i);
    }
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw ValidationError(std::string("class '") +
                            label_name(static_cast<PdLabel>(k)) +
                            "' has fewer than 2 samples");
    }
    rng.shuffle(members);
    auto take = static_cast<std::size_t>(std::clamp<long>(
        std::lround(fraction * static_cast<double>(members.size())), 1,
        static_cast<long>(members.size()) - 1));
    train.insert(train.end(), members.begin(), members.begin() + take);
    validation.insert(validation.end(), members.begin() + take,
                      members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return {std::move(train), std::move(validation)};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> random_split(
    std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  if (n < 2) throw ValidationError("need at least 2 samples to split");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  auto take = static_cast<std::size_t>(
      std::clamp<long>(std::lround(fraction * static_cast<double>(n)), 1,
                       static_cast<long>(n) - 1));
  std::vector<std::size_t> train(order.begin(), order.begin() + take);
  std::vector<std::size_t> validation(order.begin() + take, order.end());
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return {std::move(train), std::move(validation)};
}

Score score(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw ValidationError("prediction and truth lengths differ");
  }
  if (truth.empty()) throw ValidationError("cannot score empty predictions");

  Score result;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    result.confusion[truth[i]][predicted[i]]++;
  }
  std::size_t correct = 0;
  for (int k = 0; k < kNumClasses; ++k) correct += result.confusion[k][k];
  result.accuracy = static_cast<double>(correct) /
                    static_cast<double>(truth.size());

  for (int k = 0; k < kNumClasses; ++k) {
    std::size_t truth_count = 0;
    std::size_t predicted_count = 0;
    for (int j = 0; j < kNumClasses; ++j) {
      truth_count += result.confusion[k][j];
      predicted_count += result.confusion[j][k];
    }
    result.recall[k] =
        truth_count > 0 ? static_cast<double>(result.confusion[k][k]) /
                              static_cast<double>(truth_count)
                        : 0.0;
    result.class_predicted[k] = predicted_count > 0;
    result.precision[k] =
        predicted_count > 0 ? static_cast<double>(result.confusion[k][k]) /
                                  static_cast<double>(predicted_count)
                            : 0.0;
  }
  return result;
}

EvalReport run_trials(const ClassifierFactory& make_model,
                      const std::string& model_name,
                      const FeatureMatrix& features, const SplitSpec& split) {
  if (split.trials < 1) throw ValidationError("trial count must be positive");
  if (!features.all_labeled()) {
    throw ValidationError("evaluation requires labels");
  }
  const std::vector<int> y = label_codes(features);

  EvalReport report;
  report.model = model_name;
  report.features =
      features.kind ? feature_kind_name(*features.kind) : "custom";
  report.trials = split.trials;
  report.train_fraction = split.train_fraction;
  report.stratified = split.stratified;
  report.master_seed = split.master_seed;
  report.samples = features.rows();
  report.trial_accuracy.reserve(split.trials);

  double acc_sq = 0.0;
  std::array<double, kNumClasses> recall_sum{};
  std::array<double, kNumClasses> recall_sq{};
  std::array<double, kNumClasses> precision_sum{};
  std::array<double, kNumClasses> precision_sq{};

  std::vector<int> train_y;
  std::vector<int> validation_y;
  for (int t = 0; t < split.trials; ++t) {
    const std::uint64_t trial_seed =
        derive_seed(split.master_seed, static_cast<std::uint64_t>(t));
    const std::uint64_t split_seed = derive_seed(trial_seed, 1);
    const std::uint64_t fit_seed = derive_seed(trial_seed, 2);

    auto [train_idx, validation_idx] =
        split.stratified
            ? stratified_split(y, split.train_fraction, split_seed)
            : random_split(y.size(), split.train_fraction, split_seed);
    train_y.clear();
    validation_y.clear();
    for (std::size_t i : train_idx) train_y.push_back(y[i]);
    for (std::size_t i : validation_idx) validation_y.push_back(y[i]);

    auto model = make_model();
    model->fit(features.x.take_rows(train_idx), train_y, fit_seed);
    const std::vector<int> predicted =
        model->predict(features.x.take_rows(validation_idx));
    const Score s = score(validation_y, predicted);

    report.trial_accuracy.push_back(s.accuracy);
    acc_sq += s.accuracy * s.accuracy;
    for (int k = 0; k < kNumClasses; ++k) {
      recall_sum[k] += s.recall[k];
      recall_sq[k] += s.recall[k] * s.recall[k];
      precision_sum[k] += s.precision[k];
      precision_sq[k] += s.precision[k] * s.precision[k];
      if (!s.class_predicted[k]) report.never_predicted[k]++;
      for (int j = 0; j < kNumClasses; ++j) {
        report.confusion[k][j] += s.confusion[k][j];
      }
    }
  }

  const double n = static_cast<double>(split.trials);
  double acc_sum = 0.0;
  for (double a : report.trial_accuracy) acc_sum += a;
  report.accuracy_mean = acc_sum / n;
  report.accuracy_std = population_std(report.accuracy_mean, acc_sq, n);
  for (int k = 0; k < kNumClasses; ++k) {
    report.recall_mean[k] = recall_sum[k] / n;
    report.recall_std[k] = population_std(report.recall_mean[k], recall_sq[k], n);
    report.precision_mean[k] = precision_sum[k] / n;
    report.precision_std[k] =
        population_std(report.precision_mean[k], precision_sq[k], n);
  }
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["version"] = 1;
  j["model"] = report.model;
  j["features"] = report.features;
  j["trials"] = report.trials;
  j["train_fraction"] = report.train_fraction;
  j["stratified"] = report.stratified;
  j["master_seed"] = report.master_seed;
  j["samples"] = report.samples;
  j["accuracy"] = {{"mean", report.accuracy_mean},
                   {"std", report.accuracy_std}};
  for (int k = 0; k < kNumClasses; ++k) {
    nlohmann::json c;
    c["recall_mean"] = report.recall_mean[k];
    c["recall_std"] = report.recall_std[k];
    c["precision_mean"] = report.precision_mean[k];
    c["precision_std"] = report.precision_std[k];
    c["never_predicted_trials"] = report.never_predicted[k];
    j["classes"][label_name(static_cast<PdLabel>(k))] = std::move(c);
  }
  j["confusion"] = report.confusion;
  j["trial_accuracy"] = report.trial_accuracy;
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
  std::string out;
  char line[192];
  std::snprintf(line, sizeof(line),
                "model %s  features %s  trials %d  train fraction %.2f  "
                "seed %llu%s\n",
                report.model.c_str(), report.features.c_str(), report.trials,
                report.train_fraction,
                static_cast<unsigned long long>(report.master_seed),
                report.stratified ? "" : "  (unstratified)");
  out += line;
  std::snprintf(line, sizeof(line), "samples %zu  accuracy %s\n\n",
                report.samples,
                format_pm(report.accuracy_mean, report.accuracy_std).c_str());
  out += line;

  out += "type       recall               precision\n";
  bool flagged = false;
  for (int k = 0; k < kNumClasses; ++k) {
    const bool flag = report.never_predicted[k] > 0;
    flagged |= flag;
    std::snprintf(line, sizeof(line), "%-10s %s  %s\n",
                  label_name(static_cast<PdLabel>(k)),
                  format_pm(report.recall_mean[k], report.recall_std[k]).c_str(),
                  format_pm(report.precision_mean[k], report.precision_std[k],
                            flag)
                      .c_str());
    out += line;
  }
  if (flagged) {
    out += "* class never predicted in at least one trial\n";
  }

  out += "\nconfusion (rows truth, columns predicted)\n";
  std::snprintf(line, sizeof(line), "%-10s %9s %9s %9s %9s\n", "",
                "corona", "floating", "particle", "void");
  out += line;
  for (int k = 0; k < kNumClasses; ++k) {
    std::snprintf(line, sizeof(line), "%-10s %9zu %9zu %9zu %9zu\n",
                  label_name(static_cast<PdLabel>(k)), report.confusion[k][0],
                  report.confusion[k][1], report.confusion[k][2],
                  report.confusion[k][3]);
    out += line;
  }
  return out;
}

}  // namespace pdclass
