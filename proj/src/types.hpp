#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdclass {

inline constexpr int kNumClasses = 4;

// The four partial-discharge defect classes. Codes are stable and ordered.
enum class PdLabel : int { Corona = 0, Floating = 1, Particle = 2, Void = 3 };

const char* label_name(PdLabel label);

// Case-insensitive; returns nullopt for unknown tokens.
std::optional<PdLabel> parse_label(std::string_view token);

struct SignalDims {
  std::size_t phases = 64;
  std::size_t cycles = 60;
};

// One phase-resolved PD measurement: a phases x cycles matrix of nonnegative
// magnitudes. Storage is phase-major: values[p * cycles + c]. Instances are
// immutable after construction.
class PrpdSignal {
 public:
  PrpdSignal() = default;
  PrpdSignal(std::string id, std::size_t phases, std::size_t cycles,
             std::vector<double> values, std::optional<PdLabel> label = {});

  const std::string& id() const { return id_; }
  std::size_t phases() const { return phases_; }
  std::size_t cycles() const { return cycles_; }
  const std::optional<PdLabel>& label() const { return label_; }
  const std::vector<double>& values() const { return values_; }

  double at(std::size_t phase, std::size_t cycle) const {
    return values_[phase * cycles_ + cycle];
  }

 private:
  std::string id_;
  std::size_t phases_ = 0;
  std::size_t cycles_ = 0;
  std::vector<double> values_;
  std::optional<PdLabel> label_;
};

struct ValidationResult {
  bool ok = true;
  std::string message;
};

// Checks the signal's own invariants: phases >= 2, cycles >= 1, value count
// matches, every entry finite and >= 0. Reports the first violation.
ValidationResult validate_signal(const PrpdSignal& signal);

// Additionally requires the signal dimensions to match `dims`.
ValidationResult validate_signal(const PrpdSignal& signal,
                                 const SignalDims& dims);

struct Dataset {
  std::vector<PrpdSignal> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  // Dimensions shared by all samples; default dims when empty.
  SignalDims dims() const;

  // Per-class sample counts, indexed by label code; unlabeled ignored.
  std::array<std::size_t, kNumClasses> class_counts() const;

  bool all_labeled() const;
};

}  // namespace pdclass
