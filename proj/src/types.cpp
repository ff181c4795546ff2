#include "types.hpp"

#include <cctype>
#include <cmath>

namespace pdclass {

const char* label_name(PdLabel label) {
  switch (label) {
    case PdLabel::Corona:
      return "corona";
    case PdLabel::Floating:
      return "floating";
    case PdLabel::Particle:
      return "particle";
    case PdLabel::Void:
      return "void";
  }
  return "?";
}

std::optional<PdLabel> parse_label(std::string_view token) {
  std::string lower;
  lower.reserve(token.size());
  for (char c : token) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "corona") return PdLabel::Corona;
  if (lower == "floating") return PdLabel::Floating;
  if (lower == "particle") return PdLabel::Particle;
  if (lower == "void") return PdLabel::Void;
  return std::nullopt;
}

PrpdSignal::PrpdSignal(std::string id, std::size_t phases, std::size_t cycles,
                       std::vector<double> values, std::optional<PdLabel> label)
    : id_(std::move(id)),
      phases_(phases),
      cycles_(cycles),
      values_(std::move(values)),
      label_(label) {}

ValidationResult validate_signal(const PrpdSignal& signal) {
  if (signal.phases() < 2) {
    return {false, "phase count " + std::to_string(signal.phases()) + " < 2"};
  }
  if (signal.cycles() < 1) {
    return {false, "cycle count " + std::to_string(signal.cycles()) + " < 1"};
  }
  const std::size_t expected = signal.phases() * signal.cycles();
  if (signal.values().size() != expected) {
    return {false, "value count " + std::to_string(signal.values().size()) +
                       " != " + std::to_string(expected)};
  }
  for (std::size_t p = 0; p < signal.phases(); ++p) {
    for (std::size_t c = 0; c < signal.cycles(); ++c) {
      const double v = signal.at(p, c);
      if (!std::isfinite(v)) {
        return {false, "non-finite value at phase " + std::to_string(p) +
                           ", cycle " + std::to_string(c)};
      }
      if (v < 0.0) {
        return {false, "negative value at phase " + std::to_string(p) +
                           ", cycle " + std::to_string(c)};
      }
    }
  }
  return {true, ""};
}

ValidationResult validate_signal(const PrpdSignal& signal,
                                 const SignalDims& dims) {
  if (signal.phases() != dims.phases) {
    return {false, "phase count " + std::to_string(signal.phases()) +
                       " != " + std::to_string(dims.phases)};
  }
  if (signal.cycles() != dims.cycles) {
    return {false, "cycle count " + std::to_string(signal.cycles()) +
                       " != " + std::to_string(dims.cycles)};
  }
  return validate_signal(signal);
}

SignalDims Dataset::dims() const {
  if (samples.empty()) return SignalDims{};
  return {samples.front().phases(), samples.front().cycles()};
}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& s : samples) {
    if (s.label()) counts[static_cast<int>(*s.label())]++;
  }
  return counts;
}

bool Dataset::all_labeled() const {
  for (const auto& s : samples) {
    if (!s.label()) return false;
  }
  return true;
}

}  // namespace pdclass
