#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <pdclass/pdclass.h>

namespace {

// Unique scratch directory, removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("pdclass_capi_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

struct DatasetHandle {
  pd_dataset* ptr = nullptr;
  ~DatasetHandle() { pd_dataset_free(ptr); }
};

struct FeaturesHandle {
  pd_features* ptr = nullptr;
  ~FeaturesHandle() { pd_features_free(ptr); }
};

struct ModelHandle {
  pd_model* ptr = nullptr;
  ~ModelHandle() { pd_model_free(ptr); }
};

struct ReportHandle {
  pd_report* ptr = nullptr;
  ~ReportHandle() { pd_report_free(ptr); }
};

pd_dataset* small_corpus(uint64_t seed) {
  const size_t counts[PD_NUM_CLASSES] = {10, 12, 9, 8};
  pd_dataset* out = nullptr;
  REQUIRE(pd_dataset_generate(counts, seed, nullptr, 0, 0, &out) == PD_OK);
  return out;
}

}  // namespace

TEST_CASE("version, labels and error text") {
  REQUIRE(pd_version() != nullptr);
  CHECK(std::strlen(pd_version()) > 0);

  CHECK(std::string(pd_label_name(0)) == "corona");
  CHECK(std::string(pd_label_name(1)) == "floating");
  CHECK(std::string(pd_label_name(2)) == "particle");
  CHECK(std::string(pd_label_name(3)) == "void");
  CHECK(pd_label_name(4) == nullptr);
  CHECK(pd_label_name(-1) == nullptr);

  REQUIRE(pd_last_error() != nullptr);
}

TEST_CASE("dataset generation and csv round trip") {
  DatasetHandle ds;
  ds.ptr = small_corpus(5);
  CHECK(pd_dataset_size(ds.ptr) == 39);

  TempDir dir;
  const std::string path = dir.file("corpus.csv");
  REQUIRE(pd_dataset_save_csv(ds.ptr, path.c_str()) == PD_OK);

  DatasetHandle loaded;
  REQUIRE(pd_dataset_load_csv(path.c_str(), 1, 0, 0, &loaded.ptr) == PD_OK);
  CHECK(pd_dataset_size(loaded.ptr) == 39);

  DatasetHandle missing;
  CHECK(pd_dataset_load_csv(dir.file("absent.csv").c_str(), 1, 0, 0,
                            &missing.ptr) == PD_ERROR_IO);
  CHECK(std::strlen(pd_last_error()) > 0);

  const size_t counts[PD_NUM_CLASSES] = {2, 2, 2, 2};
  DatasetHandle custom;
  REQUIRE(pd_dataset_generate(counts, 1,
                              R"({"version": 1, "corona": {"cycle_fill": 0.4}})",
                              32, 20, &custom.ptr) == PD_OK);
  CHECK(pd_dataset_size(custom.ptr) == 8);

  DatasetHandle bad;
  CHECK(pd_dataset_generate(counts, 1, "{broken", 0, 0, &bad.ptr) ==
        PD_ERROR_IO);
  CHECK(pd_dataset_generate(counts, 1, R"({"version": 1, "x": {}})", 0, 0,
                            &bad.ptr) == PD_ERROR_VALIDATION);
  CHECK(pd_dataset_generate(counts, 1, nullptr, 0, 0, nullptr) ==
        PD_ERROR_INVALID_ARGUMENT);
  CHECK(pd_dataset_generate(nullptr, 1, nullptr, 0, 0, &bad.ptr) ==
        PD_ERROR_INVALID_ARGUMENT);

  pd_dataset_free(nullptr);  // must be a no-op
}

TEST_CASE("feature extraction kinds and dimensions") {
  DatasetHandle ds;
  ds.ptr = small_corpus(6);

  FeaturesHandle phase, aligned, meta;
  REQUIRE(pd_features_extract(ds.ptr, PD_FEATURES_PHASE, 0.4, &phase.ptr) ==
          PD_OK);
  REQUIRE(pd_features_extract(ds.ptr, PD_FEATURES_ALIGNED, 0.4,
                              &aligned.ptr) == PD_OK);
  REQUIRE(pd_features_extract(ds.ptr, PD_FEATURES_META, 0.4, &meta.ptr) ==
          PD_OK);

  CHECK(pd_features_rows(phase.ptr) == 39);
  CHECK(pd_features_cols(phase.ptr) == 64);
  CHECK(pd_features_cols(aligned.ptr) == 64);
  CHECK(pd_features_cols(meta.ptr) == 3);

  TempDir dir;
  const std::string path = dir.file("meta.csv");
  REQUIRE(pd_features_save_csv(meta.ptr, path.c_str()) == PD_OK);
  FeaturesHandle loaded;
  REQUIRE(pd_features_load_csv(path.c_str(), &loaded.ptr) == PD_OK);
  CHECK(pd_features_rows(loaded.ptr) == 39);
  CHECK(pd_features_cols(loaded.ptr) == 3);

  FeaturesHandle bad;
  CHECK(pd_features_extract(nullptr, PD_FEATURES_META, 0.4, &bad.ptr) ==
        PD_ERROR_INVALID_ARGUMENT);
  CHECK(pd_features_extract(ds.ptr, PD_FEATURES_META, 1.5, &bad.ptr) ==
        PD_ERROR_VALIDATION);

  pd_features_free(nullptr);
}

TEST_CASE("training prediction and persistence") {
  DatasetHandle ds;
  ds.ptr = small_corpus(7);
  FeaturesHandle meta;
  REQUIRE(pd_features_extract(ds.ptr, PD_FEATURES_META, 0.4, &meta.ptr) ==
          PD_OK);

  ModelHandle model;
  REQUIRE(pd_model_train(meta.ptr, "rf", nullptr, 1, &model.ptr) == PD_OK);
  CHECK(std::string(pd_model_kind(model.ptr)) == "rf");
  CHECK(pd_model_input_width(model.ptr) == 3);

  const size_t rows = pd_features_rows(meta.ptr);
  std::vector<int> labels(rows, -1);
  std::vector<double> proba(rows * PD_NUM_CLASSES, -1.0);
  REQUIRE(pd_model_predict(model.ptr, meta.ptr, labels.data(), proba.data()) ==
          PD_OK);
  for (size_t r = 0; r < rows; ++r) {
    CHECK(labels[r] >= 0);
    CHECK(labels[r] < PD_NUM_CLASSES);
    double sum = 0.0;
    for (int c = 0; c < PD_NUM_CLASSES; ++c) {
      const double p = proba[r * PD_NUM_CLASSES + c];
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }

  TempDir dir;
  const std::string path = dir.file("model.json");
  REQUIRE(pd_model_save(model.ptr, path.c_str()) == PD_OK);
  ModelHandle loaded;
  REQUIRE(pd_model_load(path.c_str(), &loaded.ptr) == PD_OK);
  CHECK(std::string(pd_model_kind(loaded.ptr)) == "rf");

  std::vector<int> labels2(rows, -1);
  std::vector<double> proba2(rows * PD_NUM_CLASSES, -1.0);
  REQUIRE(pd_model_predict(loaded.ptr, meta.ptr, labels2.data(),
                           proba2.data()) == PD_OK);
  CHECK(labels2 == labels);
  CHECK(proba2 == proba);

  char* csv = nullptr;
  REQUIRE(pd_model_classify_csv(model.ptr, meta.ptr, &csv) == PD_OK);
  REQUIRE(csv != nullptr);
  const std::string text(csv);
  pd_string_free(csv);
  CHECK(text.rfind("id,label,p_corona,p_floating,p_particle,p_void\n", 0) ==
        0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(rows + 1));

  ModelHandle mismatch;
  CHECK(pd_model_train(meta.ptr, "rf",
                       R"({"version": 1, "kind": "lr", "hyper": {}})", 1,
                       &mismatch.ptr) == PD_ERROR_VALIDATION);
  CHECK(std::string(pd_last_error()).find("does not match") !=
        std::string::npos);
  CHECK(pd_model_train(meta.ptr, "mlp", nullptr, 1, &mismatch.ptr) ==
        PD_ERROR_VALIDATION);
  CHECK(pd_model_train(nullptr, "rf", nullptr, 1, &mismatch.ptr) ==
        PD_ERROR_INVALID_ARGUMENT);

  pd_model_free(nullptr);
}

TEST_CASE("evaluation reports") {
  DatasetHandle ds;
  ds.ptr = small_corpus(8);

  ReportHandle report;
  REQUIRE(pd_evaluate(ds.ptr, PD_FEATURES_META, 0.4, "lr",
                      R"({"version": 1, "kind": "lr",
                          "hyper": {"iterations": 80}})",
                      3, 0.6, 1, 9, &report.ptr) == PD_OK);

  double mean = -1.0, stddev = -1.0;
  REQUIRE(pd_report_accuracy(report.ptr, &mean, &stddev) == PD_OK);
  CHECK(mean >= 0.0);
  CHECK(mean <= 1.0);
  CHECK(stddev >= 0.0);

  char* json = nullptr;
  REQUIRE(pd_report_json(report.ptr, &json) == PD_OK);
  REQUIRE(json != nullptr);
  CHECK(json[0] == '{');
  pd_string_free(json);

  char* table = nullptr;
  REQUIRE(pd_report_table(report.ptr, &table) == PD_OK);
  REQUIRE(table != nullptr);
  CHECK(std::string(table).find("corona") != std::string::npos);
  pd_string_free(table);

  ReportHandle bad;
  CHECK(pd_evaluate(ds.ptr, PD_FEATURES_META, 0.4, "lr", nullptr, 0, 0.6, 1,
                    9, &bad.ptr) == PD_ERROR_VALIDATION);
  CHECK(pd_evaluate(nullptr, PD_FEATURES_META, 0.4, "lr", nullptr, 3, 0.6, 1,
                    9, &bad.ptr) == PD_ERROR_INVALID_ARGUMENT);

  pd_report_free(nullptr);
}

TEST_CASE("rendering heatmaps through the c api") {
  DatasetHandle ds;
  ds.ptr = small_corpus(9);

  TempDir dir;
  const std::string path = dir.file("sample.pgm");
  REQUIRE(pd_dataset_render_pgm(ds.ptr, "corona_0000", path.c_str()) == PD_OK);

  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str().rfind("P5\n60 64\n255\n", 0) == 0);

  CHECK(pd_dataset_render_pgm(ds.ptr, "nope", path.c_str()) ==
        PD_ERROR_VALIDATION);
  CHECK(pd_dataset_render_pgm(ds.ptr, nullptr, path.c_str()) ==
        PD_ERROR_INVALID_ARGUMENT);
}
