#include <pdclass/pdclass.h>

#include <cstdlib>
#include <cstring>
#include <string>

#include "../dataset_io.hpp"
#include "../errors.hpp"
#include "../evaluation.hpp"
#include "../features.hpp"
#include "../model_io.hpp"
#include "../render.hpp"
#include "../synthetic.hpp"

struct pd_dataset {
  pdclass::Dataset value;
};

struct pd_features {
  pdclass::FeatureMatrix value;
};

struct pd_model {
  std::unique_ptr<pdclass::Classifier> value;
  std::string kind;
  std::size_t input_width = 0;
};

struct pd_report {
  pdclass::EvalReport value;
};

namespace {

thread_local std::string g_last_error;

pd_status fail(pd_status status, const char* message) {
  g_last_error = message;
  return status;
}

pd_status fail_invalid(const char* message) {
  return fail(PD_ERROR_INVALID_ARGUMENT, message);
}

// Runs the body and maps thrown domain errors onto status codes.
template <typename Fn>
pd_status guarded(Fn&& body) {
  try {
    body();
    return PD_OK;
  } catch (const pdclass::IoError& e) {
    return fail(PD_ERROR_IO, e.what());
  } catch (const pdclass::ValidationError& e) {
    return fail(PD_ERROR_VALIDATION, e.what());
  } catch (const pdclass::NumericError& e) {
    return fail(PD_ERROR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(PD_ERROR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

pdclass::ModelPlan resolve_plan(const char* kind, const char* config_json) {
  if (config_json == nullptr) return pdclass::default_plan(kind);
  pdclass::ModelPlan plan = pdclass::plan_from_config_json(config_json);
  if (plan.kind != kind) {
    throw pdclass::ValidationError("config kind '" + plan.kind +
                                   "' does not match requested model '" +
                                   kind + "'");
  }
  return plan;
}

pdclass::SignalDims dims_or_default(std::size_t phases, std::size_t cycles) {
  pdclass::SignalDims dims;
  if (phases > 0) dims.phases = phases;
  if (cycles > 0) dims.cycles = cycles;
  return dims;
}

}  // namespace

extern "C" {

const char* pd_version(void) { return "1.0.0"; }

const char* pd_last_error(void) { return g_last_error.c_str(); }

void pd_string_free(char* text) { std::free(text); }

const char* pd_label_name(int label) {
  if (label < 0 || label >= PD_NUM_CLASSES) return nullptr;
  return pdclass::label_name(static_cast<pdclass::PdLabel>(label));
}

pd_status pd_dataset_generate(const size_t counts[PD_NUM_CLASSES],
                              uint64_t seed, const char* profile_json,
                              size_t phases, size_t cycles, pd_dataset** out) {
  if (counts == nullptr || out == nullptr) {
    return fail_invalid("counts and out must not be NULL");
  }
  return guarded([&] {
    pdclass::SyntheticSpec spec;
    for (int k = 0; k < PD_NUM_CLASSES; ++k) spec.counts[k] = counts[k];
    if (profile_json != nullptr) {
      spec.profiles = pdclass::profiles_from_json(profile_json);
    }
    spec.dims = dims_or_default(phases, cycles);
    spec.master_seed = seed;
    *out = new pd_dataset{pdclass::generate_corpus(spec)};
  });
}

pd_status pd_dataset_load_csv(const char* path, int expect_labels,
                              size_t phases, size_t cycles, pd_dataset** out) {
  if (path == nullptr || out == nullptr) {
    return fail_invalid("path and out must not be NULL");
  }
  return guarded([&] {
    *out = new pd_dataset{pdclass::load_dataset(
        path, expect_labels != 0, dims_or_default(phases, cycles))};
  });
}

pd_status pd_dataset_save_csv(const pd_dataset* dataset, const char* path) {
  if (dataset == nullptr || path == nullptr) {
    return fail_invalid("dataset and path must not be NULL");
  }
  return guarded([&] { pdclass::save_dataset(dataset->value, path); });
}

size_t pd_dataset_size(const pd_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.size();
}

pd_status pd_dataset_render_pgm(const pd_dataset* dataset, const char* id,
                                const char* path) {
  if (dataset == nullptr || id == nullptr || path == nullptr) {
    return fail_invalid("dataset, id and path must not be NULL");
  }
  return guarded([&] {
    for (const pdclass::PrpdSignal& sample : dataset->value.samples) {
      if (sample.id() == id) {
        pdclass::save_pgm(sample, path);
        return;
      }
    }
    throw pdclass::ValidationError(std::string("unknown sample id '") + id +
                                   "'");
  });
}

void pd_dataset_free(pd_dataset* dataset) { delete dataset; }

pd_status pd_features_extract(const pd_dataset* dataset, pd_feature_kind kind,
                              double threshold, pd_features** out) {
  if (dataset == nullptr || out == nullptr) {
    return fail_invalid("dataset and out must not be NULL");
  }
  if (kind != PD_FEATURES_PHASE && kind != PD_FEATURES_ALIGNED &&
      kind != PD_FEATURES_META) {
    return fail_invalid("unknown feature kind");
  }
  return guarded([&] {
    *out = new pd_features{pdclass::extract_features(
        dataset->value, static_cast<pdclass::FeatureKind>(kind), threshold)};
  });
}

pd_status pd_features_load_csv(const char* path, pd_features** out) {
  if (path == nullptr || out == nullptr) {
    return fail_invalid("path and out must not be NULL");
  }
  return guarded([&] {
    *out = new pd_features{pdclass::load_features(path)};
  });
}

pd_status pd_features_save_csv(const pd_features* features, const char* path) {
  if (features == nullptr || path == nullptr) {
    return fail_invalid("features and path must not be NULL");
  }
  return guarded([&] { pdclass::save_features(features->value, path); });
}

size_t pd_features_rows(const pd_features* features) {
  return features == nullptr ? 0 : features->value.rows();
}

size_t pd_features_cols(const pd_features* features) {
  return features == nullptr ? 0 : features->value.cols();
}

void pd_features_free(pd_features* features) { delete features; }

pd_status pd_model_train(const pd_features* features, const char* kind,
                         const char* config_json, uint64_t seed,
                         pd_model** out) {
  if (features == nullptr || kind == nullptr || out == nullptr) {
    return fail_invalid("features, kind and out must not be NULL");
  }
  return guarded([&] {
    if (!features->value.all_labeled()) {
      throw pdclass::ValidationError("training requires labels");
    }
    const pdclass::ModelPlan plan = resolve_plan(kind, config_json);
    auto model = pdclass::make_planned(plan);
    model->fit(features->value.x, pdclass::label_codes(features->value), seed);
    *out = new pd_model{std::move(model), plan.kind, features->value.cols()};
  });
}

pd_status pd_model_save(const pd_model* model, const char* path) {
  if (model == nullptr || path == nullptr) {
    return fail_invalid("model and path must not be NULL");
  }
  return guarded(
      [&] { pdclass::save_model(*model->value, model->input_width, path); });
}

pd_status pd_model_load(const char* path, pd_model** out) {
  if (path == nullptr || out == nullptr) {
    return fail_invalid("path and out must not be NULL");
  }
  return guarded([&] {
    pdclass::LoadedModel loaded = pdclass::load_model(path);
    *out = new pd_model{std::move(loaded.model), loaded.kind,
                        loaded.input_width};
  });
}

const char* pd_model_kind(const pd_model* model) {
  return model == nullptr ? nullptr : model->kind.c_str();
}

size_t pd_model_input_width(const pd_model* model) {
  return model == nullptr ? 0 : model->input_width;
}

pd_status pd_model_predict(const pd_model* model, const pd_features* features,
                           int* labels, double* probabilities) {
  if (model == nullptr || features == nullptr) {
    return fail_invalid("model and features must not be NULL");
  }
  return guarded([&] {
    if (features->value.cols() != model->input_width) {
      throw pdclass::ValidationError(
          "feature width mismatch: model expects " +
          std::to_string(model->input_width) + " columns, got " +
          std::to_string(features->value.cols()));
    }
    const pdclass::Matrix proba =
        model->value->predict_proba(features->value.x);
    if (probabilities != nullptr) {
      for (std::size_t r = 0; r < proba.rows(); ++r) {
        for (int k = 0; k < PD_NUM_CLASSES; ++k) {
          probabilities[r * PD_NUM_CLASSES + k] = proba.at(r, k);
        }
      }
    }
    if (labels != nullptr) {
      const std::vector<int> predicted =
          model->value->predict(features->value.x);
      for (std::size_t r = 0; r < predicted.size(); ++r) {
        labels[r] = predicted[r];
      }
    }
  });
}

pd_status pd_model_classify_csv(const pd_model* model,
                                const pd_features* features, char** out_csv) {
  if (model == nullptr || features == nullptr || out_csv == nullptr) {
    return fail_invalid("model, features and out_csv must not be NULL");
  }
  return guarded([&] {
    if (features->value.cols() != model->input_width) {
      throw pdclass::ValidationError(
          "feature width mismatch: model expects " +
          std::to_string(model->input_width) + " columns, got " +
          std::to_string(features->value.cols()));
    }
    const pdclass::Matrix proba =
        model->value->predict_proba(features->value.x);
    const std::vector<int> predicted =
        model->value->predict(features->value.x);
    std::string csv = "id,label,p_corona,p_floating,p_particle,p_void\n";
    for (std::size_t r = 0; r < proba.rows(); ++r) {
      csv += features->value.ids[r];
      csv += ',';
      csv += pdclass::label_name(static_cast<pdclass::PdLabel>(predicted[r]));
      for (int k = 0; k < PD_NUM_CLASSES; ++k) {
        csv += ',';
        csv += pdclass::format_double(proba.at(r, k));
      }
      csv += '\n';
    }
    *out_csv = copy_string(csv);
  });
}

void pd_model_free(pd_model* model) { delete model; }

pd_status pd_evaluate(const pd_dataset* dataset, pd_feature_kind kind,
                      double threshold, const char* model_kind,
                      const char* config_json, int trials,
                      double train_fraction, int stratified, uint64_t seed,
                      pd_report** out) {
  if (dataset == nullptr || model_kind == nullptr || out == nullptr) {
    return fail_invalid("dataset, model_kind and out must not be NULL");
  }
  return guarded([&] {
    const pdclass::ModelPlan plan = resolve_plan(model_kind, config_json);
    const pdclass::FeatureMatrix features = pdclass::extract_features(
        dataset->value, static_cast<pdclass::FeatureKind>(kind), threshold);
    pdclass::SplitSpec split;
    split.train_fraction = train_fraction;
    split.stratified = stratified != 0;
    split.trials = trials;
    split.master_seed = seed;
    pdclass::EvalReport report = pdclass::run_trials(
        [&plan] { return pdclass::make_planned(plan); }, plan.kind, features,
        split);
    *out = new pd_report{std::move(report)};
  });
}

pd_status pd_report_json(const pd_report* report, char** out_text) {
  if (report == nullptr || out_text == nullptr) {
    return fail_invalid("report and out_text must not be NULL");
  }
  return guarded(
      [&] { *out_text = copy_string(pdclass::report_json(report->value)); });
}

pd_status pd_report_table(const pd_report* report, char** out_text) {
  if (report == nullptr || out_text == nullptr) {
    return fail_invalid("report and out_text must not be NULL");
  }
  return guarded(
      [&] { *out_text = copy_string(pdclass::report_table(report->value)); });
}

pd_status pd_report_accuracy(const pd_report* report, double* mean,
                             double* std_dev) {
  if (report == nullptr) return fail_invalid("report must not be NULL");
  if (mean != nullptr) *mean = report->value.accuracy_mean;
  if (std_dev != nullptr) *std_dev = report->value.accuracy_std;
  return PD_OK;
}

void pd_report_free(pd_report* report) { delete report; }

}  // extern "C"
