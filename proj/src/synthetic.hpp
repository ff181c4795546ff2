#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "types.hpp"

namespace pdclass {

// Generative recipe for one PD class. Band positions and widths are
// fractions of the phase count; amplitudes are normalized to [0, 1].
struct ClassProfile {
  std::vector<double> band_centers;
  std::vector<double> band_widths;  // half-width of each band
  double cycle_fill = 0.0;          // probability a cycle fires per band
  double amplitude_low = 0.0;
  double amplitude_high = 0.0;
  double scatter_fraction = 0.0;  // per-cell probability of isolated points
  double noise_amplitude = 0.05;  // background noise ceiling
  double noise_fraction = 0.1;    // per-cell background noise probability
  double band_density = 0.85;     // per-phase hit probability inside a fired band
  double sample_jitter = 0.2;     // per-sample spread of fill/scatter
  double amplitude_jitter = 0.15; // per-sample spread of pulse strength
  double center_jitter = 0.02;    // per-sample band drift, fraction of P
  double width_jitter = 0.0;      // per-sample band width spread, fraction of P
  double density_jitter = 0.0;    // per-phase spread of in-band hit probability
};

ValidationResult validate_profile(const ClassProfile& profile);

// Profiles shaped after the characteristic PRPD morphologies: corona a
// single thick band, floating two strong bands, void two sparse symmetric
// bands, particle diffuse scatter over all phases.
std::array<ClassProfile, kNumClasses> default_profiles();

struct SyntheticSpec {
  std::array<std::size_t, kNumClasses> counts{85, 99, 80, 64};
  std::array<ClassProfile, kNumClasses> profiles = default_profiles();
  SignalDims dims;
  std::uint64_t master_seed = 0;
};

// Strict JSON profile overrides: {"version":1, "corona": {...}, ...}.
// Unknown keys are errors. Classes omitted keep their defaults.
std::array<ClassProfile, kNumClasses> profiles_from_json(
    const std::string& json_text);

// Deterministic function of (label, profile, dims, seed). The sample ends
// with a random cyclic phase offset, so raw signals are unaligned.
PrpdSignal generate_sample(PdLabel label, const ClassProfile& profile,
                           const SignalDims& dims, std::uint64_t seed,
                           std::string id = {});

// Class-ordered corpus with exact per-class counts; per-sample seeds are
// derived from the master seed and the sample index.
Dataset generate_corpus(const SyntheticSpec& spec);

}  // namespace pdclass
