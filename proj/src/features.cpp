#include "features.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "dataset_io.hpp"
#include "errors.hpp"

namespace pdclass {

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::PhaseMagnitude:
      return "phase";
    case FeatureKind::AlignedPhaseMagnitude:
      return "aligned";
    case FeatureKind::Meta:
      return "meta";
  }
  return "?";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view token) {
  if (token == "phase") return FeatureKind::PhaseMagnitude;
  if (token == "aligned") return FeatureKind::AlignedPhaseMagnitude;
  if (token == "meta") return FeatureKind::Meta;
  return std::nullopt;
}

std::vector<double> phase_magnitude(const PrpdSignal& signal) {
  std::vector<double> sums(signal.phases(), 0.0);
  for (std::size_t p = 0; p < signal.phases(); ++p) {
    double s = 0.0;
    for (std::size_t c = 0; c < signal.cycles(); ++c) s += signal.at(p, c);
    sums[p] = s;
  }
  return sums;
}

PrpdSignal align_phases(const PrpdSignal& signal) {
  const auto sums = phase_magnitude(signal);
  std::size_t shift = 0;
  for (std::size_t p = 1; p < sums.size(); ++p) {
    if (sums[p] > sums[shift]) shift = p;
  }
  if (shift == 0) return signal;

  const std::size_t phases = signal.phases();
  const std::size_t cycles = signal.cycles();
  std::vector<double> rotated(phases * cycles);
  for (std::size_t p = 0; p < phases; ++p) {
    const std::size_t src = (p + shift) % phases;
    for (std::size_t c = 0; c < cycles; ++c) {
      rotated[p * cycles + c] = signal.at(src, c);
    }
  }
  return PrpdSignal(signal.id(), phases, cycles, std::move(rotated),
                    signal.label());
}

double total_magnitude(const PrpdSignal& signal) {
  double total = 0.0;
  for (double v : signal.values()) total += v;
  return total;
}

double max_magnitude(const PrpdSignal& signal) {
  const auto& values = signal.values();
  if (values.size() < 3) {
    throw ValidationError("max_magnitude requires at least 3 points, got " +
                          std::to_string(values.size()));
  }
  // Single pass tracking the three largest values.
  double top0 = -1.0, top1 = -1.0, top2 = -1.0;
  for (double v : values) {
    if (v > top0) {
      top2 = top1;
      top1 = top0;
      top0 = v;
    } else if (v > top1) {
      top2 = top1;
      top1 = v;
    } else if (v > top2) {
      top2 = v;
    }
  }
  return (top0 + top1 + top2) / 3.0;
}

std::vector<int> significant_phase_counts(const PrpdSignal& signal,
                                          double threshold_ratio) {
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0)) {
    throw ValidationError("threshold_ratio must lie in (0, 1)");
  }
  const double peak =
      *std::max_element(signal.values().begin(), signal.values().end());
  const double threshold = threshold_ratio * peak;
  const PrpdSignal aligned = align_phases(signal);

  std::vector<int> counts(aligned.phases(), 0);
  for (std::size_t p = 0; p < aligned.phases(); ++p) {
    int n = 0;
    for (std::size_t c = 0; c < aligned.cycles(); ++c) {
      if (aligned.at(p, c) > threshold) ++n;
    }
    counts[p] = n;
  }
  return counts;
}

int longest_empty_band(const PrpdSignal& signal, double threshold_ratio) {
  const auto counts = significant_phase_counts(signal, threshold_ratio);
  int longest = 0;
  int run = 0;
  for (int c : counts) {
    if (c == 0) {
      ++run;
      longest = std::max(longest, run);
    } else {
      run = 0;
    }
  }
  return longest;
}

MetaFeatures extract_meta(const PrpdSignal& signal, double threshold_ratio) {
  MetaFeatures meta;
  meta.total_magnitude = total_magnitude(signal);
  meta.max_magnitude = max_magnitude(signal);
  meta.longest_empty_band = longest_empty_band(signal, threshold_ratio);
  return meta;
}

bool FeatureMatrix::all_labeled() const {
  for (const auto& l : labels) {
    if (!l) return false;
  }
  return true;
}

std::vector<int> label_codes(const FeatureMatrix& features) {
  std::vector<int> codes;
  codes.reserve(features.labels.size());
  for (std::size_t i = 0; i < features.labels.size(); ++i) {
    if (!features.labels[i]) {
      throw ValidationError("row " + std::to_string(i) + " (id '" +
                            features.ids[i] + "') has no label");
    }
    codes.push_back(static_cast<int>(*features.labels[i]));
  }
  return codes;
}

FeatureMatrix extract_features(const Dataset& dataset, FeatureKind kind,
                               double threshold_ratio) {
  const std::size_t n = dataset.size();
  const std::size_t width =
      kind == FeatureKind::Meta ? 3 : dataset.dims().phases;

  FeatureMatrix out;
  out.kind = kind;
  out.x = Matrix(n, width);
  out.ids.reserve(n);
  out.labels.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const PrpdSignal& s = dataset.samples[i];
    out.ids.push_back(s.id());
    out.labels.push_back(s.label());
    auto row = out.x.row(i);
    switch (kind) {
      case FeatureKind::PhaseMagnitude: {
        const auto pm = phase_magnitude(s);
        std::copy(pm.begin(), pm.end(), row.begin());
        break;
      }
      case FeatureKind::AlignedPhaseMagnitude: {
        const auto pm = phase_magnitude(align_phases(s));
        std::copy(pm.begin(), pm.end(), row.begin());
        break;
      }
      case FeatureKind::Meta: {
        const MetaFeatures meta = extract_meta(s, threshold_ratio);
        row[0] = meta.total_magnitude;
        row[1] = meta.max_magnitude;
        row[2] = static_cast<double>(meta.longest_empty_band);
        break;
      }
    }
  }
  return out;
}

void save_features(const FeatureMatrix& features, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);

  out << "id,label";
  for (std::size_t j = 0; j < features.cols(); ++j) out << ",f" << j;
  out << "\n";
  for (std::size_t i = 0; i < features.rows(); ++i) {
    out << features.ids[i] << ",";
    if (features.labels[i]) out << label_name(*features.labels[i]);
    for (double v : features.x.row(i)) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

FeatureMatrix load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        fields.push_back(std::move(cur));
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    fields.push_back(std::move(cur));
    return fields;
  };

  auto header = split(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw IoError("bad header in " + path +
                  ": expected id,label,f0,... columns");
  }
  const std::size_t width = header.size() - 2;

  FeatureMatrix out;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line);
    const std::string where = path + " line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw ValidationError(where + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(fields.size()));
    }
    out.ids.push_back(fields[0]);
    if (fields[1].empty()) {
      out.labels.push_back(std::nullopt);
    } else {
      auto label = parse_label(fields[1]);
      if (!label) {
        throw ValidationError(where + ": unknown label '" + fields[1] + "'");
      }
      out.labels.push_back(label);
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      const std::string& f = fields[j + 2];
      char* end = nullptr;
      row[j] = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size()) {
        throw ValidationError(where + ": bad value '" + f + "' in column f" +
                              std::to_string(j));
      }
    }
    rows.push_back(std::move(row));
  }

  out.x = Matrix(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto dst = out.x.row(i);
    std::copy(rows[i].begin(), rows[i].end(), dst.begin());
  }
  return out;
}

}  // namespace pdclass
