#include <algorithm>
#include <vector>

#include <doctest.h>

#include "errors.hpp"
#include "features.hpp"
#include "helpers.hpp"
#include "synthetic.hpp"

using namespace pdclass;
using testutil::close_rel;
using testutil::make_signal;
using testutil::random_signal;
using testutil::rotate_signal;

namespace {

// Independent reference: anchor on the first-largest phase sum, mark phases
// holding any cell strictly above ratio * peak, then try every linear
// window of the anchored phase order.
int window_scan_empty_band(const PrpdSignal& s, double ratio) {
  const std::size_t phases = s.phases();
  const std::size_t cycles = s.cycles();
  std::vector<double> sums(phases, 0.0);
  double peak = 0.0;
  for (std::size_t p = 0; p < phases; ++p) {
    for (std::size_t c = 0; c < cycles; ++c) {
      sums[p] += s.at(p, c);
      peak = std::max(peak, s.at(p, c));
    }
  }
  std::size_t anchor = 0;
  for (std::size_t p = 1; p < phases; ++p) {
    if (sums[p] > sums[anchor]) anchor = p;
  }
  std::vector<char> empty(phases, 1);
  for (std::size_t p = 0; p < phases; ++p) {
    for (std::size_t c = 0; c < cycles; ++c) {
      if (s.at(p, c) > ratio * peak) {
        empty[(p + phases - anchor) % phases] = 0;
      }
    }
  }
  int best = 0;
  for (std::size_t start = 0; start < phases; ++start) {
    for (std::size_t len = 1; start + len <= phases; ++len) {
      bool all = true;
      for (std::size_t p = start; p < start + len; ++p) {
        if (!empty[p]) {
          all = false;
          break;
        }
      }
      if (all) best = std::max(best, static_cast<int>(len));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("meta features on uniform and empty matrices") {
  const auto ones = make_signal(64, 60, std::vector<double>(64 * 60, 1.0));
  const MetaFeatures m = extract_meta(ones);
  CHECK(m.total_magnitude == doctest::Approx(3840.0));
  CHECK(m.max_magnitude == doctest::Approx(1.0));
  CHECK(m.longest_empty_band == 0);

  const auto zeros = make_signal(64, 60, std::vector<double>(64 * 60, 0.0));
  const MetaFeatures z = extract_meta(zeros);
  CHECK(z.total_magnitude == 0.0);
  CHECK(z.max_magnitude == 0.0);
  CHECK(z.longest_empty_band == 64);
}

TEST_CASE("max magnitude averages the three largest points") {
  std::vector<double> values(4 * 3, 0.0);
  values[0] = 9.0;
  values[5] = 6.0;
  values[7] = 3.0;
  values[11] = 1.0;
  CHECK(max_magnitude(make_signal(4, 3, values)) == doctest::Approx(6.0));

  CHECK(max_magnitude(make_signal(2, 2, {5.0, 5.0, 5.0, 5.0})) ==
        doctest::Approx(5.0));

  CHECK_THROWS_AS(max_magnitude(make_signal(2, 1, {1.0, 2.0})),
                  ValidationError);
}

TEST_CASE("phase magnitude sums cycles per phase") {
  const auto s = make_signal(3, 2, {1.0, 2.0, 0.5, 0.5, 4.0, 0.0});
  const auto sums = phase_magnitude(s);
  REQUIRE(sums.size() == 3);
  CHECK(sums[0] == doctest::Approx(3.0));
  CHECK(sums[1] == doctest::Approx(1.0));
  CHECK(sums[2] == doctest::Approx(4.0));
  CHECK(total_magnitude(s) == doctest::Approx(8.0));
}

TEST_CASE("alignment rotates the strongest phase to the front") {
  std::vector<double> values(8 * 2, 0.1);
  values[5 * 2] = 3.0;
  values[5 * 2 + 1] = 2.0;
  const auto s = make_signal(8, 2, values);

  const PrpdSignal aligned = align_phases(s);
  for (std::size_t p = 0; p < 8; ++p) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(aligned.at(p, c) == s.at((p + 5) % 8, c));
    }
  }
  CHECK(aligned.at(0, 0) == 3.0);

  const PrpdSignal twice = align_phases(aligned);
  CHECK(twice.values() == aligned.values());
}

TEST_CASE("alignment ties resolve to the lowest phase index") {
  std::vector<double> values(6 * 1, 0.0);
  values[2] = 1.5;
  values[4] = 1.5;
  const auto s = make_signal(6, 1, values);
  const PrpdSignal aligned = align_phases(s);
  CHECK(aligned.at(0, 0) == 1.5);
  CHECK(aligned.at(2, 0) == 1.5);
  CHECK(aligned.at(4, 0) == 0.0);
}

TEST_CASE("significance threshold is strict") {
  // Anchor lands on phase 0; phases 1 and 3 sit exactly at and just above
  // the 0.4 cut.
  std::vector<double> values(4 * 2, 0.0);
  values[0] = 1.0;
  values[1 * 2] = 0.4;
  values[3 * 2] = 0.41;
  const auto s = make_signal(4, 2, values);

  const auto counts = significant_phase_counts(s);
  REQUIRE(counts.size() == 4);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 0);
  CHECK(counts[2] == 0);
  CHECK(counts[3] == 1);
  CHECK(longest_empty_band(s) == 2);

  CHECK_THROWS_AS(significant_phase_counts(s, 0.0), ValidationError);
  CHECK_THROWS_AS(significant_phase_counts(s, 1.0), ValidationError);
  CHECK_THROWS_AS(longest_empty_band(s, -0.2), ValidationError);
}

TEST_CASE("empty band length matches an exhaustive window scan") {
  Rng rng(11);
  const double zero_fractions[] = {0.5, 0.9, 0.97, 0.995};
  for (int i = 0; i < 60; ++i) {
    const auto s = random_signal(64, 60, rng, zero_fractions[i % 4]);
    CHECK(longest_empty_band(s) == window_scan_empty_band(s, 0.4));
  }
  for (int i = 0; i < 100; ++i) {
    const std::size_t phases = 2 + rng.below(7);
    const std::size_t cycles = 1 + rng.below(5);
    const auto s = random_signal(phases, cycles, rng, rng.uniform());
    CHECK(longest_empty_band(s) == window_scan_empty_band(s, 0.4));
    CHECK(longest_empty_band(s, 0.7) == window_scan_empty_band(s, 0.7));
  }
}

TEST_CASE("meta features survive cyclic rotations") {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    auto base = random_signal(64, 60, rng, 0.95);
    // Force a unique phase-magnitude maximum so the anchor is unambiguous.
    auto values = base.values();
    std::vector<double> sums(64, 0.0);
    for (std::size_t p = 0; p < 64; ++p) {
      for (std::size_t c = 0; c < 60; ++c) sums[p] += values[p * 60 + c];
    }
    const std::size_t q = rng.below(64);
    const double top = *std::max_element(sums.begin(), sums.end());
    values[q * 60] += top + 1.0;
    const auto s = make_signal(64, 60, values);

    const MetaFeatures m = extract_meta(s);
    const auto aligned = phase_magnitude(align_phases(s));
    const std::size_t shift = rng.below(64);
    const PrpdSignal rotated = rotate_signal(s, shift);

    const MetaFeatures mr = extract_meta(rotated);
    CHECK(mr.longest_empty_band == m.longest_empty_band);
    CHECK(close_rel(mr.total_magnitude, m.total_magnitude, 1e-9));
    CHECK(close_rel(mr.max_magnitude, m.max_magnitude, 1e-9));

    const auto aligned_r = phase_magnitude(align_phases(rotated));
    REQUIRE(aligned_r.size() == aligned.size());
    for (std::size_t p = 0; p < aligned.size(); ++p) {
      CHECK(close_rel(aligned_r[p], aligned[p], 1e-9));
    }
  }
}

TEST_CASE("scaling magnitudes scales totals but not the band") {
  Rng rng(17);
  const auto s = random_signal(32, 20, rng, 0.9);
  std::vector<double> scaled = s.values();
  for (double& v : scaled) v *= 3.7;
  const auto t = make_signal(32, 20, scaled);

  CHECK(close_rel(total_magnitude(t), 3.7 * total_magnitude(s), 1e-12));
  CHECK(close_rel(max_magnitude(t), 3.7 * max_magnitude(s), 1e-12));
  CHECK(longest_empty_band(t) == longest_empty_band(s));
}

TEST_CASE("extract_features shapes rows ids and labels") {
  SyntheticSpec spec;
  spec.counts = {3, 3, 3, 3};
  spec.master_seed = 4;
  const Dataset corpus = generate_corpus(spec);

  const FeatureMatrix phase = extract_features(corpus, FeatureKind::PhaseMagnitude);
  const FeatureMatrix aligned =
      extract_features(corpus, FeatureKind::AlignedPhaseMagnitude);
  const FeatureMatrix meta = extract_features(corpus, FeatureKind::Meta);

  CHECK(phase.rows() == 12);
  CHECK(phase.cols() == 64);
  CHECK(aligned.cols() == 64);
  CHECK(meta.cols() == 3);
  CHECK(phase.kind == FeatureKind::PhaseMagnitude);
  CHECK(aligned.kind == FeatureKind::AlignedPhaseMagnitude);
  CHECK(meta.kind == FeatureKind::Meta);
  CHECK(meta.all_labeled());

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(meta.ids[i] == corpus.samples[i].id());
    CHECK(meta.labels[i] == corpus.samples[i].label());

    // Aligned rows lead with their largest entry.
    const auto row = aligned.x.row(i);
    CHECK(*std::max_element(row.begin(), row.end()) == row[0]);

    const MetaFeatures m = extract_meta(corpus.samples[i]);
    CHECK(meta.x.at(i, 0) == m.total_magnitude);
    CHECK(meta.x.at(i, 1) == m.max_magnitude);
    CHECK(meta.x.at(i, 2) == static_cast<double>(m.longest_empty_band));
  }

  const auto codes = label_codes(meta);
  CHECK(codes.size() == 12);
  CHECK(codes[0] == 0);
  CHECK(codes[11] == 3);
}

TEST_CASE("feature csv round trip") {
  SyntheticSpec spec;
  spec.counts = {2, 2, 2, 2};
  spec.master_seed = 9;
  const Dataset corpus = generate_corpus(spec);
  FeatureMatrix meta = extract_features(corpus, FeatureKind::Meta);
  meta.labels[3] = std::nullopt;

  testutil::TempDir dir;
  const std::string path = dir.file("features.csv");
  save_features(meta, path);
  const FeatureMatrix loaded = load_features(path);

  CHECK(loaded.x == meta.x);
  CHECK(loaded.ids == meta.ids);
  CHECK(loaded.labels == meta.labels);
  CHECK_FALSE(loaded.kind.has_value());
  CHECK_FALSE(loaded.all_labeled());
  CHECK_THROWS_AS(label_codes(loaded), ValidationError);

  CHECK_THROWS_AS(load_features(dir.file("missing.csv")), IoError);
}
