#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <pdclass/pdclass.h>

namespace {

// Exit codes: 0 success, 2 usage, 3 bad data or file, 4 numerical failure.
int exit_code_for(pd_status status) {
  switch (status) {
    case PD_OK:
      return 0;
    case PD_ERROR_INVALID_ARGUMENT:
      return 2;
    case PD_ERROR_IO:
    case PD_ERROR_VALIDATION:
      return 3;
    default:
      return 4;
  }
}

int report_failure(pd_status status) {
  std::fprintf(stderr, "error: %s\n", pd_last_error());
  return exit_code_for(status);
}

struct DatasetDeleter {
  void operator()(pd_dataset* p) const { pd_dataset_free(p); }
};
struct FeaturesDeleter {
  void operator()(pd_features* p) const { pd_features_free(p); }
};
struct ModelDeleter {
  void operator()(pd_model* p) const { pd_model_free(p); }
};
struct ReportDeleter {
  void operator()(pd_report* p) const { pd_report_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { pd_string_free(p); }
};

using DatasetPtr = std::unique_ptr<pd_dataset, DatasetDeleter>;
using FeaturesPtr = std::unique_ptr<pd_features, FeaturesDeleter>;
using ModelPtr = std::unique_ptr<pd_model, ModelDeleter>;
using ReportPtr = std::unique_ptr<pd_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

bool read_text_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::stringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

bool write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

pd_feature_kind feature_kind_of(const std::string& name) {
  if (name == "phase") return PD_FEATURES_PHASE;
  if (name == "aligned") return PD_FEATURES_ALIGNED;
  return PD_FEATURES_META;
}

struct CommonOptions {
  std::size_t phases = 64;
  std::size_t cycles = 60;
};

struct GenerateOptions {
  std::string out;
  std::uint64_t seed = 0;
  std::vector<std::size_t> counts{85, 99, 80, 64};
  std::string profile_file;
};

struct ExtractOptions {
  std::string in;
  std::string features = "meta";
  double threshold = 0.4;
  std::string out;
};

struct TrainOptions {
  std::string in;
  std::string model = "stack";
  std::string config_file;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvaluateOptions {
  std::string in;
  std::string model = "stack";
  std::string config_file;
  std::string features = "meta";
  double threshold = 0.4;
  int trials = 100;
  double train_frac = 0.6;
  bool unstratified = false;
  std::uint64_t seed = 0;
  std::string report_file;
};

struct ClassifyOptions {
  std::string in;
  std::string model_file;
  std::string out;
};

struct RenderOptions {
  std::string in;
  std::string id;
  std::string out;
};

int run_generate(const GenerateOptions& opt, const CommonOptions& common) {
  std::string profile_json;
  const char* profile = nullptr;
  if (!opt.profile_file.empty()) {
    if (!read_text_file(opt.profile_file, profile_json)) {
      std::fprintf(stderr, "error: cannot open file '%s'\n",
                   opt.profile_file.c_str());
      return 3;
    }
    profile = profile_json.c_str();
  }

  std::size_t counts[PD_NUM_CLASSES];
  for (int k = 0; k < PD_NUM_CLASSES; ++k) counts[k] = opt.counts[k];
  pd_dataset* raw = nullptr;
  pd_status status = pd_dataset_generate(counts, opt.seed, profile,
                                         common.phases, common.cycles, &raw);
  if (status != PD_OK) return report_failure(status);
  DatasetPtr dataset(raw);

  status = pd_dataset_save_csv(dataset.get(), opt.out.c_str());
  if (status != PD_OK) return report_failure(status);
  std::printf("wrote %zu samples to %s\n", pd_dataset_size(dataset.get()),
              opt.out.c_str());
  return 0;
}

int run_extract(const ExtractOptions& opt, const CommonOptions& common) {
  pd_dataset* raw = nullptr;
  pd_status status = pd_dataset_load_csv(opt.in.c_str(), 0, common.phases,
                                         common.cycles, &raw);
  if (status != PD_OK) return report_failure(status);
  DatasetPtr dataset(raw);

  pd_features* raw_features = nullptr;
  status = pd_features_extract(dataset.get(), feature_kind_of(opt.features),
                               opt.threshold, &raw_features);
  if (status != PD_OK) return report_failure(status);
  FeaturesPtr features(raw_features);

  status = pd_features_save_csv(features.get(), opt.out.c_str());
  if (status != PD_OK) return report_failure(status);
  std::printf("wrote %zu x %zu %s features to %s\n",
              pd_features_rows(features.get()),
              pd_features_cols(features.get()), opt.features.c_str(),
              opt.out.c_str());
  return 0;
}

int run_train(const TrainOptions& opt) {
  pd_features* raw_features = nullptr;
  pd_status status = pd_features_load_csv(opt.in.c_str(), &raw_features);
  if (status != PD_OK) return report_failure(status);
  FeaturesPtr features(raw_features);

  std::string config_json;
  const char* config = nullptr;
  if (!opt.config_file.empty()) {
    if (!read_text_file(opt.config_file, config_json)) {
      std::fprintf(stderr, "error: cannot open file '%s'\n",
                   opt.config_file.c_str());
      return 3;
    }
    config = config_json.c_str();
  }

  pd_model* raw_model = nullptr;
  status = pd_model_train(features.get(), opt.model.c_str(), config, opt.seed,
                          &raw_model);
  if (status != PD_OK) return report_failure(status);
  ModelPtr model(raw_model);

  status = pd_model_save(model.get(), opt.out.c_str());
  if (status != PD_OK) return report_failure(status);
  std::printf("trained %s on %zu samples, saved to %s\n",
              pd_model_kind(model.get()), pd_features_rows(features.get()),
              opt.out.c_str());
  return 0;
}

int run_evaluate(const EvaluateOptions& opt, const CommonOptions& common) {
  pd_dataset* raw = nullptr;
  pd_status status = pd_dataset_load_csv(opt.in.c_str(), 1, common.phases,
                                         common.cycles, &raw);
  if (status != PD_OK) return report_failure(status);
  DatasetPtr dataset(raw);

  std::string config_json;
  const char* config = nullptr;
  if (!opt.config_file.empty()) {
    if (!read_text_file(opt.config_file, config_json)) {
      std::fprintf(stderr, "error: cannot open file '%s'\n",
                   opt.config_file.c_str());
      return 3;
    }
    config = config_json.c_str();
  }

  pd_report* raw_report = nullptr;
  status = pd_evaluate(dataset.get(), feature_kind_of(opt.features),
                       opt.threshold, opt.model.c_str(), config, opt.trials,
                       opt.train_frac, opt.unstratified ? 0 : 1, opt.seed,
                       &raw_report);
  if (status != PD_OK) return report_failure(status);
  ReportPtr report(raw_report);

  char* table = nullptr;
  status = pd_report_table(report.get(), &table);
  if (status != PD_OK) return report_failure(status);
  StringPtr table_guard(table);
  std::fputs(table, stdout);

  if (!opt.report_file.empty()) {
    char* json = nullptr;
    status = pd_report_json(report.get(), &json);
    if (status != PD_OK) return report_failure(status);
    StringPtr json_guard(json);
    if (!write_text_file(opt.report_file, json)) {
      std::fprintf(stderr, "error: cannot write file '%s'\n",
                   opt.report_file.c_str());
      return 3;
    }
  }
  return 0;
}

int run_classify(const ClassifyOptions& opt) {
  pd_features* raw_features = nullptr;
  pd_status status = pd_features_load_csv(opt.in.c_str(), &raw_features);
  if (status != PD_OK) return report_failure(status);
  FeaturesPtr features(raw_features);

  pd_model* raw_model = nullptr;
  status = pd_model_load(opt.model_file.c_str(), &raw_model);
  if (status != PD_OK) return report_failure(status);
  ModelPtr model(raw_model);

  char* csv = nullptr;
  status = pd_model_classify_csv(model.get(), features.get(), &csv);
  if (status != PD_OK) return report_failure(status);
  StringPtr csv_guard(csv);

  if (opt.out.empty()) {
    std::fputs(csv, stdout);
  } else if (!write_text_file(opt.out, csv)) {
    std::fprintf(stderr, "error: cannot write file '%s'\n", opt.out.c_str());
    return 3;
  }
  return 0;
}

int run_render(const RenderOptions& opt, const CommonOptions& common) {
  pd_dataset* raw = nullptr;
  pd_status status = pd_dataset_load_csv(opt.in.c_str(), 0, common.phases,
                                         common.cycles, &raw);
  if (status != PD_OK) return report_failure(status);
  DatasetPtr dataset(raw);

  status = pd_dataset_render_pgm(dataset.get(), opt.id.c_str(),
                                 opt.out.c_str());
  if (status != PD_OK) return report_failure(status);
  std::printf("wrote heatmap of '%s' to %s\n", opt.id.c_str(),
              opt.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-resolved partial discharge classification toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--phases", common.phases, "phase bins per cycle")
      ->capture_default_str();
  app.add_option("--cycles", common.cycles, "cycles per sample")
      ->capture_default_str();

  GenerateOptions generate;
  auto* cmd_generate =
      app.add_subcommand("generate", "synthesize a labeled PRPD corpus");
  cmd_generate->add_option("--out", generate.out, "output dataset CSV")
      ->required();
  cmd_generate->add_option("--seed", generate.seed, "master seed")
      ->capture_default_str();
  cmd_generate
      ->add_option("--counts", generate.counts,
                   "per-class sample counts: corona,floating,particle,void")
      ->delimiter(',')
      ->expected(4);
  cmd_generate->add_option("--profile-file", generate.profile_file,
                           "JSON generator profile overrides");

  ExtractOptions extract;
  auto* cmd_extract =
      app.add_subcommand("extract", "extract feature vectors from a dataset");
  cmd_extract->add_option("--in", extract.in, "input dataset CSV")->required();
  cmd_extract
      ->add_option("--features", extract.features, "feature set to extract")
      ->check(CLI::IsMember({"phase", "aligned", "meta"}))
      ->capture_default_str();
  cmd_extract
      ->add_option("--threshold", extract.threshold,
                   "significance ratio for the empty-band feature")
      ->capture_default_str();
  cmd_extract->add_option("--out", extract.out, "output feature CSV")
      ->required();

  TrainOptions train;
  auto* cmd_train =
      app.add_subcommand("train", "fit a classifier on labeled features");
  cmd_train->add_option("--in", train.in, "labeled feature CSV")->required();
  cmd_train->add_option("--model", train.model, "classifier kind")
      ->check(CLI::IsMember({"lr", "rf", "svm", "fsvm", "gb", "stack"}))
      ->capture_default_str();
  cmd_train->add_option("--config", train.config_file,
                        "JSON hyperparameter config");
  cmd_train->add_option("--seed", train.seed, "training seed")
      ->capture_default_str();
  cmd_train->add_option("--out", train.out, "output model file")->required();

  EvaluateOptions evaluate;
  auto* cmd_evaluate = app.add_subcommand(
      "evaluate", "repeated split/fit/score protocol on a labeled dataset");
  cmd_evaluate->add_option("--in", evaluate.in, "labeled dataset CSV")
      ->required();
  cmd_evaluate->add_option("--model", evaluate.model, "classifier kind")
      ->check(CLI::IsMember({"lr", "rf", "svm", "fsvm", "gb", "stack"}))
      ->capture_default_str();
  cmd_evaluate->add_option("--config", evaluate.config_file,
                           "JSON hyperparameter config");
  cmd_evaluate
      ->add_option("--features", evaluate.features, "feature set to evaluate")
      ->check(CLI::IsMember({"phase", "aligned", "meta"}))
      ->capture_default_str();
  cmd_evaluate
      ->add_option("--threshold", evaluate.threshold,
                   "significance ratio for the empty-band feature")
      ->capture_default_str();
  cmd_evaluate->add_option("--trials", evaluate.trials, "number of trials")
      ->capture_default_str();
  cmd_evaluate
      ->add_option("--train-frac", evaluate.train_frac,
                   "training fraction of each split")
      ->capture_default_str();
  cmd_evaluate->add_flag("--unstratified", evaluate.unstratified,
                         "split without per-class stratification");
  cmd_evaluate->add_option("--seed", evaluate.seed, "master seed")
      ->capture_default_str();
  cmd_evaluate->add_option("--report", evaluate.report_file,
                           "write the JSON report here");

  ClassifyOptions classify;
  auto* cmd_classify = app.add_subcommand(
      "classify", "label feature rows with a trained model");
  cmd_classify->add_option("--in", classify.in, "feature CSV")->required();
  cmd_classify->add_option("--model", classify.model_file, "model file")
      ->required();
  cmd_classify->add_option("--out", classify.out,
                           "output CSV (stdout when omitted)");

  RenderOptions render;
  auto* cmd_render =
      app.add_subcommand("render", "write one sample as a PGM heatmap");
  cmd_render->add_option("--in", render.in, "input dataset CSV")->required();
  cmd_render->add_option("--id", render.id, "sample id to render")
      ->required();
  cmd_render->add_option("--out", render.out, "output PGM file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(cmd_generate)) return run_generate(generate, common);
  if (app.got_subcommand(cmd_extract)) return run_extract(extract, common);
  if (app.got_subcommand(cmd_train)) return run_train(train);
  if (app.got_subcommand(cmd_evaluate)) return run_evaluate(evaluate, common);
  if (app.got_subcommand(cmd_classify)) return run_classify(classify);
  if (app.got_subcommand(cmd_render)) return run_render(render, common);
  return 2;
}
