#include "model_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace pdclass {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError("unknown key '" + item.key() + "' in " + context);
    }
  }
}

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) {
    throw IoError("matrix data length does not match its shape");
  }
  m.data() = data;
  return m;
}

json nodes_to_json(const std::vector<TreeNode>& nodes) {
  json out = json::array();
  for (const TreeNode& n : nodes) {
    out.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_class,
                   n.leaf_value});
  }
  return out;
}

std::vector<TreeNode> nodes_from_json(const json& j) {
  std::vector<TreeNode> nodes;
  nodes.reserve(j.size());
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 6) {
      throw IoError("malformed tree node record");
    }
    TreeNode n;
    n.feature = row[0].get<int>();
    n.threshold = row[1].get<double>();
    n.left = row[2].get<int>();
    n.right = row[3].get<int>();
    n.leaf_class = row[4].get<int>();
    n.leaf_value = row[5].get<double>();
    nodes.push_back(n);
  }
  return nodes;
}

json standardizer_to_json(const Standardizer& s) {
  return {{"mean", s.mean()}, {"scale", s.scale()}};
}

Standardizer standardizer_from_json(const json& j) {
  Standardizer s;
  s.set_state(j.at("mean").get<std::vector<double>>(),
              j.at("scale").get<std::vector<double>>());
  return s;
}

json lr_hyper_json(const LrConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"iterations", c.iterations},
          {"l2_penalty", c.l2_penalty}};
}

LrConfig lr_hyper_from(const json& j) {
  require_keys(j, {"learning_rate", "iterations", "l2_penalty"}, "lr hyper");
  LrConfig c;
  if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"];
  if (j.contains("iterations")) c.iterations = j["iterations"];
  if (j.contains("l2_penalty")) c.l2_penalty = j["l2_penalty"];
  return c;
}

json rf_hyper_json(const RfConfig& c) {
  return {{"trees", c.trees},
          {"max_depth", c.max_depth},
          {"min_leaf", c.min_leaf}};
}

RfConfig rf_hyper_from(const json& j) {
  require_keys(j, {"trees", "max_depth", "min_leaf"}, "rf hyper");
  RfConfig c;
  if (j.contains("trees")) c.trees = j["trees"];
  if (j.contains("max_depth")) c.max_depth = j["max_depth"];
  if (j.contains("min_leaf")) c.min_leaf = j["min_leaf"];
  return c;
}

json svm_hyper_json(const SvmConfig& c) {
  return {{"kernel", kernel_name(c.kernel)},
          {"c", c.c},
          {"gamma", c.gamma},
          {"tolerance", c.tolerance},
          {"max_steps", c.max_steps}};
}

SvmConfig svm_hyper_from(const json& j, bool fuzzy) {
  require_keys(j, {"kernel", "c", "gamma", "tolerance", "max_steps"},
               fuzzy ? "fsvm hyper" : "svm hyper");
  SvmConfig c;
  c.fuzzy = fuzzy;
  if (j.contains("kernel")) c.kernel = parse_kernel(j["kernel"]);
  if (j.contains("c")) c.c = j["c"];
  if (j.contains("gamma")) c.gamma = j["gamma"];
  if (j.contains("tolerance")) c.tolerance = j["tolerance"];
  if (j.contains("max_steps")) c.max_steps = j["max_steps"];
  return c;
}

json gb_hyper_json(const GbConfig& c) {
  return {{"rounds", c.rounds},
          {"depth", c.depth},
          {"learning_rate", c.learning_rate}};
}

GbConfig gb_hyper_from(const json& j) {
  require_keys(j, {"rounds", "depth", "learning_rate"}, "gb hyper");
  GbConfig c;
  if (j.contains("rounds")) c.rounds = j["rounds"];
  if (j.contains("depth")) c.depth = j["depth"];
  if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"];
  return c;
}

json spec_hyper_json(const ClassifierSpec& spec) {
  if (const auto* lr = std::get_if<LrConfig>(&spec.config)) {
    return lr_hyper_json(*lr);
  }
  if (const auto* rf = std::get_if<RfConfig>(&spec.config)) {
    return rf_hyper_json(*rf);
  }
  if (const auto* gb = std::get_if<GbConfig>(&spec.config)) {
    return gb_hyper_json(*gb);
  }
  return svm_hyper_json(std::get<SvmConfig>(spec.config));
}

json spec_to_json(const ClassifierSpec& spec) {
  return {{"kind", spec_kind(spec)},
          {"seed_offset", spec.seed_offset},
          {"hyper", spec_hyper_json(spec)}};
}

ClassifierSpec spec_from_json(const json& j, std::uint64_t default_offset) {
  require_keys(j, {"kind", "seed_offset", "hyper"}, "classifier spec");
  const std::string kind = j.at("kind").get<std::string>();
  const json hyper = j.contains("hyper") ? j["hyper"] : json::object();
  ClassifierSpec spec;
  if (kind == "lr") {
    spec.config = lr_hyper_from(hyper);
  } else if (kind == "rf") {
    spec.config = rf_hyper_from(hyper);
  } else if (kind == "svm") {
    spec.config = svm_hyper_from(hyper, false);
  } else if (kind == "fsvm") {
    spec.config = svm_hyper_from(hyper, true);
  } else if (kind == "gb") {
    spec.config = gb_hyper_from(hyper);
  } else {
    throw ValidationError("unknown classifier kind '" + kind + "'");
  }
  spec.seed_offset = j.contains("seed_offset")
                         ? j["seed_offset"].get<std::uint64_t>()
                         : default_offset;
  return spec;
}

json stacking_hyper_json(const StackingConfig& c) {
  json level_one = json::array();
  for (const ClassifierSpec& spec : c.level_one) {
    level_one.push_back(spec_to_json(spec));
  }
  return {{"level_one", level_one},
          {"meta", spec_to_json(c.meta)},
          {"use_probabilities", c.use_probabilities},
          {"include_original", c.include_original},
          {"oof_folds", c.oof_folds}};
}

StackingConfig stacking_hyper_from(const json& j) {
  require_keys(j,
               {"level_one", "meta", "use_probabilities", "include_original",
                "oof_folds"},
               "stack hyper");
  StackingConfig c = default_stacking_config();
  if (j.contains("level_one")) {
    c.level_one.clear();
    for (std::size_t i = 0; i < j["level_one"].size(); ++i) {
      c.level_one.push_back(spec_from_json(j["level_one"][i], i));
    }
  }
  if (j.contains("meta")) {
    c.meta = spec_from_json(j["meta"], c.level_one.size());
  }
  if (j.contains("use_probabilities")) {
    c.use_probabilities = j["use_probabilities"];
  }
  if (j.contains("include_original")) {
    c.include_original = j["include_original"];
  }
  if (j.contains("oof_folds")) c.oof_folds = j["oof_folds"];
  return c;
}

json model_body(const Classifier& model);

json lr_body(const LogisticRegression& m) {
  return {{"standardizer", standardizer_to_json(m.standardizer())},
          {"weights", matrix_to_json(m.weights())}};
}

json rf_body(const RandomForest& m) {
  json trees = json::array();
  for (const ClassificationTree& tree : m.trees()) {
    trees.push_back(nodes_to_json(tree.nodes()));
  }
  return {{"trees", trees}};
}

json svm_body(const SupportVectorMachine& m) {
  json binaries = json::array();
  for (const SvmBinary& b : m.binaries()) {
    if (!b.present) {
      binaries.push_back({{"present", false}});
      continue;
    }
    binaries.push_back({{"present", true},
                        {"support_vectors", matrix_to_json(b.support_vectors)},
                        {"coef", b.coef},
                        {"bias", b.bias},
                        {"platt_a", b.platt_a},
                        {"platt_b", b.platt_b}});
  }
  return {{"standardizer", standardizer_to_json(m.standardizer())},
          {"gamma_used", m.gamma_used()},
          {"binaries", binaries}};
}

json gb_body(const GradientBoosting& m) {
  json rounds = json::array();
  for (const auto& round : m.rounds()) {
    json per_class = json::array();
    for (const RegressionTree& tree : round) {
      per_class.push_back(nodes_to_json(tree.nodes()));
    }
    rounds.push_back(per_class);
  }
  return {{"rounds", rounds}};
}

json stack_body(const StackingModel& m, std::size_t input_width) {
  json level_one = json::array();
  for (const auto& model : m.level_one_models()) {
    level_one.push_back(json::parse(model_to_json(*model, input_width)));
  }
  return {{"level_one", level_one},
          {"meta",
           json::parse(model_to_json(m.meta_model(), m.meta_width()))}};
}

json model_body(const Classifier& model) {
  const std::string kind = model.kind();
  if (kind == "lr") {
    return lr_body(dynamic_cast<const LogisticRegression&>(model));
  }
  if (kind == "rf") {
    return rf_body(dynamic_cast<const RandomForest&>(model));
  }
  if (kind == "svm" || kind == "fsvm") {
    return svm_body(dynamic_cast<const SupportVectorMachine&>(model));
  }
  if (kind == "gb") {
    return gb_body(dynamic_cast<const GradientBoosting&>(model));
  }
  throw ValidationError("cannot serialize classifier kind '" + kind + "'");
}

json hyper_of_model(const Classifier& model) {
  const std::string kind = model.kind();
  if (kind == "lr") {
    return lr_hyper_json(dynamic_cast<const LogisticRegression&>(model)
                             .config());
  }
  if (kind == "rf") {
    return rf_hyper_json(dynamic_cast<const RandomForest&>(model).config());
  }
  if (kind == "svm" || kind == "fsvm") {
    return svm_hyper_json(dynamic_cast<const SupportVectorMachine&>(model)
                              .config());
  }
  if (kind == "gb") {
    return gb_hyper_json(dynamic_cast<const GradientBoosting&>(model)
                             .config());
  }
  return stacking_hyper_json(dynamic_cast<const StackingModel&>(model)
                                 .config());
}

std::unique_ptr<Classifier> model_from_doc(const json& doc);

std::unique_ptr<Classifier> lr_from_doc(const json& doc) {
  auto model = std::make_unique<LogisticRegression>(
      lr_hyper_from(doc.at("hyper")));
  model->set_state(standardizer_from_json(doc.at("state").at("standardizer")),
                   matrix_from_json(doc.at("state").at("weights")));
  return model;
}

std::unique_ptr<Classifier> rf_from_doc(const json& doc) {
  auto model = std::make_unique<RandomForest>(rf_hyper_from(doc.at("hyper")));
  std::vector<ClassificationTree> trees;
  for (const json& nodes : doc.at("state").at("trees")) {
    ClassificationTree tree;
    tree.set_nodes(nodes_from_json(nodes));
    trees.push_back(std::move(tree));
  }
  model->set_state(std::move(trees));
  return model;
}

std::unique_ptr<Classifier> svm_from_doc(const json& doc, bool fuzzy) {
  auto model = std::make_unique<SupportVectorMachine>(
      svm_hyper_from(doc.at("hyper"), fuzzy));
  const json& state = doc.at("state");
  std::array<SvmBinary, kNumClasses> binaries;
  const json& blist = state.at("binaries");
  if (blist.size() != kNumClasses) {
    throw IoError("svm model must carry one binary per class");
  }
  for (int k = 0; k < kNumClasses; ++k) {
    const json& b = blist[k];
    if (!b.at("present").get<bool>()) continue;
    binaries[k].present = true;
    binaries[k].support_vectors = matrix_from_json(b.at("support_vectors"));
    binaries[k].coef = b.at("coef").get<std::vector<double>>();
    binaries[k].bias = b.at("bias").get<double>();
    binaries[k].platt_a = b.at("platt_a").get<double>();
    binaries[k].platt_b = b.at("platt_b").get<double>();
  }
  model->set_state(standardizer_from_json(state.at("standardizer")),
                   state.at("gamma_used").get<double>(), std::move(binaries));
  return model;
}

std::unique_ptr<Classifier> gb_from_doc(const json& doc) {
  auto model = std::make_unique<GradientBoosting>(
      gb_hyper_from(doc.at("hyper")));
  std::vector<std::array<RegressionTree, kNumClasses>> rounds;
  for (const json& round : doc.at("state").at("rounds")) {
    if (round.size() != kNumClasses) {
      throw IoError("gb round must carry one tree per class");
    }
    rounds.emplace_back();
    for (int k = 0; k < kNumClasses; ++k) {
      rounds.back()[k].set_nodes(nodes_from_json(round[k]));
    }
  }
  model->set_state(std::move(rounds));
  return model;
}

std::unique_ptr<Classifier> stack_from_doc(const json& doc,
                                           std::size_t input_width) {
  auto model = std::make_unique<StackingModel>(
      stacking_hyper_from(doc.at("hyper")));
  const json& state = doc.at("state");
  std::vector<std::unique_ptr<Classifier>> level_one;
  for (const json& sub : state.at("level_one")) {
    level_one.push_back(model_from_doc(sub));
  }
  model->set_state(std::move(level_one), model_from_doc(state.at("meta")),
                   input_width);
  return model;
}

std::unique_ptr<Classifier> model_from_doc(const json& doc) {
  if (doc.at("format").get<std::string>() != "pdclass-model") {
    throw IoError("not a model file (missing pdclass-model format tag)");
  }
  if (doc.at("version").get<int>() != kModelFormatVersion) {
    throw IoError("unsupported model format version");
  }
  const std::string kind = doc.at("kind").get<std::string>();
  const std::size_t width = doc.at("input_width").get<std::size_t>();
  if (kind == "lr") return lr_from_doc(doc);
  if (kind == "rf") return rf_from_doc(doc);
  if (kind == "svm") return svm_from_doc(doc, false);
  if (kind == "fsvm") return svm_from_doc(doc, true);
  if (kind == "gb") return gb_from_doc(doc);
  if (kind == "stack") return stack_from_doc(doc, width);
  throw IoError("unknown model kind '" + kind + "'");
}

}  // namespace

ModelPlan default_plan(const std::string& kind) {
  ModelPlan plan;
  plan.kind = kind;
  if (kind == "lr") {
    plan.spec.config = LrConfig{};
  } else if (kind == "rf") {
    plan.spec.config = RfConfig{};
  } else if (kind == "svm") {
    plan.spec.config = SvmConfig{};
  } else if (kind == "fsvm") {
    SvmConfig c;
    c.fuzzy = true;
    plan.spec.config = c;
  } else if (kind == "gb") {
    plan.spec.config = GbConfig{};
  } else if (kind == "stack") {
    plan.stacking = default_stacking_config();
  } else {
    throw ValidationError("unknown model kind '" + kind + "'");
  }
  return plan;
}

ModelPlan plan_from_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("cannot parse config: ") + e.what());
  }
  try {
    require_keys(doc, {"version", "kind", "hyper"}, "config");
    if (doc.at("version").get<int>() != 1) {
      throw ValidationError("unsupported config version");
    }
    const std::string kind = doc.at("kind").get<std::string>();
    ModelPlan plan = default_plan(kind);
    const json hyper = doc.contains("hyper") ? doc["hyper"] : json::object();
    if (kind == "stack") {
      plan.stacking = stacking_hyper_from(hyper);
    } else {
      json spec = {{"kind", kind}, {"hyper", hyper}};
      plan.spec = spec_from_json(spec, 0);
    }
    return plan;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
}

std::unique_ptr<Classifier> make_planned(const ModelPlan& plan) {
  if (plan.kind == "stack") {
    return std::make_unique<StackingModel>(plan.stacking);
  }
  return make_classifier(plan.spec);
}

std::string model_to_json(const Classifier& model, std::size_t input_width) {
  json doc;
  doc["format"] = "pdclass-model";
  doc["version"] = kModelFormatVersion;
  doc["kind"] = model.kind();
  doc["input_width"] = input_width;
  doc["hyper"] = hyper_of_model(model);
  if (std::string(model.kind()) == "stack") {
    doc["state"] =
        stack_body(dynamic_cast<const StackingModel&>(model), input_width);
  } else {
    doc["state"] = model_body(model);
  }
  return doc.dump() + "\n";
}

void save_model(const Classifier& model, std::size_t input_width,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file '" + path + "' for writing");
  out << model_to_json(model, input_width);
  if (!out) throw IoError("failed writing model to '" + path + "'");
}

LoadedModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("cannot parse model: ") + e.what());
  }
  try {
    LoadedModel loaded;
    loaded.kind = doc.at("kind").get<std::string>();
    loaded.input_width = doc.at("input_width").get<std::size_t>();
    loaded.model = model_from_doc(doc);
    return loaded;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed model file: ") + e.what());
  }
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace pdclass
