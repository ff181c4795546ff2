#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "types.hpp"

namespace pdclass {

enum class FeatureKind : int {
  PhaseMagnitude = 0,
  AlignedPhaseMagnitude = 1,
  Meta = 2,
};

const char* feature_kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view token);

inline constexpr double kDefaultSignificance = 0.4;

// The three whole-signal descriptors: sum of all points, mean of the three
// largest points, and the longest run of phases with no significant point.
struct MetaFeatures {
  double total_magnitude = 0.0;
  double max_magnitude = 0.0;
  int longest_empty_band = 0;
};

// Per-phase sums across cycles (length P).
std::vector<double> phase_magnitude(const PrpdSignal& signal);

// Cyclically rotates phases so the phase with the largest phase magnitude
// becomes phase 0 (ties resolved to the lowest index). Cycles untouched.
PrpdSignal align_phases(const PrpdSignal& signal);

double total_magnitude(const PrpdSignal& signal);

// Mean of the three largest point magnitudes; requires at least 3 points.
double max_magnitude(const PrpdSignal& signal);

// For each phase of the aligned signal, the number of cycles whose magnitude
// strictly exceeds threshold_ratio * (largest point magnitude).
std::vector<int> significant_phase_counts(
    const PrpdSignal& signal, double threshold_ratio = kDefaultSignificance);

// Length of the longest run of consecutive phases with zero significant
// cycles, scanned linearly over the aligned phases. All-zero signals yield P.
int longest_empty_band(const PrpdSignal& signal,
                       double threshold_ratio = kDefaultSignificance);

MetaFeatures extract_meta(const PrpdSignal& signal,
                          double threshold_ratio = kDefaultSignificance);

// Rectangular feature rows with parallel ids and (optional) labels.
struct FeatureMatrix {
  Matrix x;
  std::vector<std::string> ids;
  std::vector<std::optional<PdLabel>> labels;
  std::optional<FeatureKind> kind;

  std::size_t rows() const { return x.rows(); }
  std::size_t cols() const { return x.cols(); }
  bool all_labeled() const;
};

// Label codes for supervised use; throws ValidationError on unlabeled rows.
std::vector<int> label_codes(const FeatureMatrix& features);

FeatureMatrix extract_features(const Dataset& dataset, FeatureKind kind,
                               double threshold_ratio = kDefaultSignificance);

// CSV layout: header `id,label,f0,...,f{k-1}`; label may be empty.
void save_features(const FeatureMatrix& features, const std::string& path);
FeatureMatrix load_features(const std::string& path);

}  // namespace pdclass
