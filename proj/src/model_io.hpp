#pragma once

#include <memory>
#include <string>

#include "stacking.hpp"

namespace pdclass {

inline constexpr int kModelFormatVersion = 1;

// Resolved training recipe: either a single learner spec or a stacking
// config, selected by `kind` (lr | rf | svm | fsvm | gb | stack).
struct ModelPlan {
  std::string kind;
  ClassifierSpec spec;
  StackingConfig stacking;
};

ModelPlan default_plan(const std::string& kind);

// Strict config document: {"version": 1, "kind": ..., "hyper": {...}}.
// Unknown keys are errors; hyperparameters omitted from "hyper" keep their
// defaults. Level-one entries default their seed_offset to their position.
ModelPlan plan_from_config_json(const std::string& text);

std::unique_ptr<Classifier> make_planned(const ModelPlan& plan);

// Self-describing versioned model document. Doubles survive the round trip
// exactly, so a loaded model reproduces predictions bit for bit.
std::string model_to_json(const Classifier& model, std::size_t input_width);
void save_model(const Classifier& model, std::size_t input_width,
                const std::string& path);

struct LoadedModel {
  std::unique_ptr<Classifier> model;
  std::string kind;
  std::size_t input_width = 0;
};

LoadedModel model_from_json(const std::string& text);
LoadedModel load_model(const std::string& path);

}  // namespace pdclass
