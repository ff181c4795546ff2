#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "dataset_io.hpp"
#include "errors.hpp"
#include "helpers.hpp"
#include "synthetic.hpp"

using namespace pdclass;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("format_double round trips exactly") {
  const double cases[] = {0.0,  1.0,   -1.0,        0.1,       1.0 / 3.0,
                          1e-9, 1e300, 1234.5678e9, 0x1.8p-52, 42.0};
  for (double v : cases) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("dataset csv round trips bitwise") {
  SyntheticSpec spec;
  spec.counts = {3, 2, 2, 2};
  spec.master_seed = 6;
  const Dataset corpus = generate_corpus(spec);

  testutil::TempDir dir;
  const std::string path = dir.file("corpus.csv");
  save_dataset(corpus, path);
  const Dataset loaded = load_dataset(path, true);

  REQUIRE(loaded.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(loaded.samples[i].id() == corpus.samples[i].id());
    CHECK(loaded.samples[i].label() == corpus.samples[i].label());
    CHECK(loaded.samples[i].values() == corpus.samples[i].values());
  }
}

TEST_CASE("unlabeled rows survive the round trip") {
  Dataset d;
  d.samples.push_back(testutil::make_signal(4, 3, std::vector<double>(12, 0.25),
                                            {}, "anon"));

  testutil::TempDir dir;
  const std::string path = dir.file("unlabeled.csv");
  save_dataset(d, path);

  const Dataset loaded = load_dataset(path, false, SignalDims{4, 3});
  CHECK_FALSE(loaded.samples[0].label().has_value());
  CHECK(loaded.samples[0].id() == "anon");

  CHECK_THROWS_AS(load_dataset(path, true, SignalDims{4, 3}),
                  ValidationError);
}

TEST_CASE("loading validates the file shape") {
  testutil::TempDir dir;

  CHECK_THROWS_AS(load_dataset(dir.file("absent.csv"), false), IoError);

  const std::string empty = dir.file("empty.csv");
  write_file(empty, "");
  CHECK_THROWS_AS(load_dataset(empty, false), IoError);

  const std::string bad_header = dir.file("bad_header.csv");
  write_file(bad_header, "sample,v0,v1\n");
  CHECK_THROWS_AS(load_dataset(bad_header, false, SignalDims{2, 1}), IoError);

  const std::string header = "id,label,v0,v1\n";

  const std::string short_row = dir.file("short_row.csv");
  write_file(short_row, header + "a,corona,0.5\n");
  CHECK_THROWS_AS(load_dataset(short_row, false, SignalDims{2, 1}),
                  ValidationError);

  const std::string bad_label = dir.file("bad_label.csv");
  write_file(bad_label, header + "a,surface,0.5,0.5\n");
  CHECK_THROWS_AS(load_dataset(bad_label, false, SignalDims{2, 1}),
                  ValidationError);

  const std::string bad_value = dir.file("bad_value.csv");
  write_file(bad_value, header + "a,corona,0.5,oops\n");
  CHECK_THROWS_AS(load_dataset(bad_value, false, SignalDims{2, 1}),
                  ValidationError);

  const std::string negative = dir.file("negative.csv");
  write_file(negative, header + "a,corona,0.5,-0.25\n");
  CHECK_THROWS_AS(load_dataset(negative, false, SignalDims{2, 1}),
                  ValidationError);

  const std::string ok = dir.file("ok.csv");
  write_file(ok, header + "a,corona,0.5,0.25\n");
  const Dataset loaded = load_dataset(ok, true, SignalDims{2, 1});
  CHECK(loaded.samples[0].at(0, 0) == 0.5);
  CHECK(loaded.samples[0].at(1, 0) == 0.25);
}
