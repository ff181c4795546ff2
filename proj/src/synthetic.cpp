#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace pdclass {

ValidationResult validate_profile(const ClassProfile& p) {
  if (p.band_centers.size() != p.band_widths.size()) {
    return {false, "band_centers and band_widths must have equal length"};
  }
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(p.cycle_fill)) return {false, "cycle_fill outside [0, 1]"};
  if (!in01(p.scatter_fraction)) return {false, "scatter_fraction outside [0, 1]"};
  if (!in01(p.noise_fraction)) return {false, "noise_fraction outside [0, 1]"};
  if (!in01(p.band_density)) return {false, "band_density outside [0, 1]"};
  if (p.amplitude_low < 0.0 || p.amplitude_low > p.amplitude_high) {
    return {false, "amplitude range must satisfy 0 <= low <= high"};
  }
  if (p.noise_amplitude < 0.0) return {false, "noise_amplitude must be >= 0"};
  if (p.sample_jitter < 0.0 || p.amplitude_jitter < 0.0 ||
      p.center_jitter < 0.0 || p.width_jitter < 0.0 ||
      p.density_jitter < 0.0) {
    return {false, "jitters must be >= 0"};
  }
  if (p.band_centers.empty() && p.scatter_fraction <= 0.0) {
    return {false, "profile needs at least one band or a scatter fraction"};
  }
  for (double c : p.band_centers) {
    if (!in01(c)) return {false, "band center outside [0, 1]"};
  }
  for (double w : p.band_widths) {
    if (w <= 0.0 || w > 0.5) return {false, "band width outside (0, 0.5]"};
  }
  return {true, ""};
}

std::array<ClassProfile, kNumClasses> default_profiles() {
  std::array<ClassProfile, kNumClasses> profiles;

  ClassProfile& corona = profiles[static_cast<int>(PdLabel::Corona)];
  corona.band_centers = {0.25};
  corona.band_widths = {0.09};
  corona.cycle_fill = 0.9;
  corona.amplitude_low = 0.6;
  corona.amplitude_high = 1.0;
  corona.width_jitter = 0.01;
  corona.density_jitter = 0.3;

  ClassProfile& floating = profiles[static_cast<int>(PdLabel::Floating)];
  floating.band_centers = {0.2, 0.7};
  floating.band_widths = {0.08, 0.08};
  floating.cycle_fill = 0.98;
  floating.amplitude_low = 0.7;
  floating.amplitude_high = 1.0;
  floating.band_density = 1.0;
  floating.sample_jitter = 0.2;
  floating.center_jitter = 0.08;
  floating.width_jitter = 0.015;
  floating.density_jitter = 0.3;

  ClassProfile& particle = profiles[static_cast<int>(PdLabel::Particle)];
  particle.scatter_fraction = 0.25;
  particle.amplitude_low = 0.2;
  particle.amplitude_high = 0.6;
  particle.sample_jitter = 0.1;
  particle.amplitude_jitter = 0.08;

  // Wide intensity spread: weak void discharges stay faint and sparse,
  // strong ones reach into floating territory.
  ClassProfile& voidp = profiles[static_cast<int>(PdLabel::Void)];
  voidp.band_centers = {0.25, 0.75};
  voidp.band_widths = {0.08, 0.08};
  voidp.cycle_fill = 0.7;
  voidp.amplitude_low = 0.3;
  voidp.amplitude_high = 0.7;
  voidp.band_density = 1.0;
  voidp.sample_jitter = 0.42;
  voidp.amplitude_jitter = 0.28;
  voidp.center_jitter = 0.09;
  voidp.width_jitter = 0.015;
  voidp.density_jitter = 0.4;

  return profiles;
}

namespace {

void apply_profile_key(ClassProfile& p, const std::string& key,
                       const nlohmann::json& value) {
  if (key == "band_centers") {
    p.band_centers = value.get<std::vector<double>>();
  } else if (key == "band_widths") {
    p.band_widths = value.get<std::vector<double>>();
  } else if (key == "cycle_fill") {
    p.cycle_fill = value.get<double>();
  } else if (key == "amplitude_low") {
    p.amplitude_low = value.get<double>();
  } else if (key == "amplitude_high") {
    p.amplitude_high = value.get<double>();
  } else if (key == "scatter_fraction") {
    p.scatter_fraction = value.get<double>();
  } else if (key == "noise_amplitude") {
    p.noise_amplitude = value.get<double>();
  } else if (key == "noise_fraction") {
    p.noise_fraction = value.get<double>();
  } else if (key == "band_density") {
    p.band_density = value.get<double>();
  } else if (key == "sample_jitter") {
    p.sample_jitter = value.get<double>();
  } else if (key == "amplitude_jitter") {
    p.amplitude_jitter = value.get<double>();
  } else if (key == "center_jitter") {
    p.center_jitter = value.get<double>();
  } else if (key == "width_jitter") {
    p.width_jitter = value.get<double>();
  } else if (key == "density_jitter") {
    p.density_jitter = value.get<double>();
  } else {
    throw ValidationError("unknown profile key '" + key + "'");
  }
}

}  // namespace

std::array<ClassProfile, kNumClasses> profiles_from_json(
    const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("profile JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("profile JSON must be an object");
  if (!doc.contains("version") || doc["version"] != 1) {
    throw ValidationError("profile JSON must declare \"version\": 1");
  }

  auto profiles = default_profiles();
  for (const auto& [key, value] : doc.items()) {
    if (key == "version") continue;
    auto label = parse_label(key);
    if (!label) throw ValidationError("unknown profile class '" + key + "'");
    if (!value.is_object()) {
      throw ValidationError("profile for '" + key + "' must be an object");
    }
    ClassProfile& p = profiles[static_cast<int>(*label)];
    try {
      for (const auto& [pkey, pvalue] : value.items()) {
        apply_profile_key(p, pkey, pvalue);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("profile for '" + key + "': " + e.what());
    }
    auto check = validate_profile(p);
    if (!check.ok) {
      throw ValidationError("profile for '" + key + "': " + check.message);
    }
  }
  return profiles;
}

PrpdSignal generate_sample(PdLabel label, const ClassProfile& profile,
                           const SignalDims& dims, std::uint64_t seed,
                           std::string id) {
  auto check = validate_profile(profile);
  if (!check.ok) throw ValidationError("invalid profile: " + check.message);

  const std::size_t phases = dims.phases;
  const std::size_t cycles = dims.cycles;
  Rng rng(seed);
  std::vector<double> cells(phases * cycles, 0.0);
  auto deposit = [&](std::size_t p, std::size_t c, double amp) {
    double& cell = cells[p * cycles + c];
    cell = std::max(cell, amp);
  };

  // Per-sample variation: discharge density and pulse strength drift
  // independently from sample to sample.
  const double intensity =
      1.0 + rng.uniform(-profile.sample_jitter, profile.sample_jitter);
  const double strength =
      1.0 + rng.uniform(-profile.amplitude_jitter, profile.amplitude_jitter);
  const double fill = std::clamp(profile.cycle_fill * intensity, 0.0, 1.0);
  const double scatter =
      std::clamp(profile.scatter_fraction * intensity, 0.0, 1.0);
  auto pulse = [&](double taper) {
    const double amp =
        rng.uniform(profile.amplitude_low, profile.amplitude_high);
    return std::clamp(amp * taper * strength, 0.0, 1.0);
  };

  for (std::size_t b = 0; b < profile.band_centers.size(); ++b) {
    const double drift =
        rng.uniform(-profile.center_jitter, profile.center_jitter);
    const double stretch =
        rng.uniform(-profile.width_jitter, profile.width_jitter);
    const double center = (profile.band_centers[b] + drift) *
                          static_cast<double>(phases);
    const double half_width =
        std::max(profile.band_widths[b] + stretch, 0.015) *
        static_cast<double>(phases);
    const long lo = std::lround(center - half_width);
    const long hi = std::lround(center + half_width);
    // Hit density varies phase to phase within a band, fixed per sample.
    std::vector<double> phase_density(static_cast<std::size_t>(hi - lo + 1));
    for (double& d : phase_density) {
      const double wobble =
          1.0 + rng.uniform(-profile.density_jitter, profile.density_jitter);
      d = std::clamp(profile.band_density * wobble, 0.0, 1.0);
    }
    for (std::size_t c = 0; c < cycles; ++c) {
      if (rng.uniform() >= fill) continue;
      for (long p = lo; p <= hi; ++p) {
        if (rng.uniform() >= phase_density[static_cast<std::size_t>(p - lo)])
          continue;
        const double offset = std::abs(static_cast<double>(p) - center);
        const double taper =
            1.0 - 0.5 * (offset / half_width) * (offset / half_width);
        const double amp = pulse(std::max(taper, 0.0));
        const std::size_t phase =
            static_cast<std::size_t>(((p % static_cast<long>(phases)) +
                                      static_cast<long>(phases)) %
                                     static_cast<long>(phases));
        deposit(phase, c, amp);
      }
    }
  }

  if (scatter > 0.0) {
    for (std::size_t p = 0; p < phases; ++p) {
      for (std::size_t c = 0; c < cycles; ++c) {
        if (rng.uniform() < scatter) {
          deposit(p, c, pulse(1.0));
        }
      }
    }
  }

  if (profile.noise_fraction > 0.0) {
    for (std::size_t p = 0; p < phases; ++p) {
      for (std::size_t c = 0; c < cycles; ++c) {
        if (rng.uniform() < profile.noise_fraction) {
          deposit(p, c, rng.uniform(0.0, profile.noise_amplitude));
        }
      }
    }
  }

  // Random acquisition offset: signals do not share a starting phase.
  const std::size_t shift = rng.below(phases);
  if (shift != 0) {
    std::vector<double> rotated(phases * cycles);
    for (std::size_t p = 0; p < phases; ++p) {
      const std::size_t dst = (p + shift) % phases;
      for (std::size_t c = 0; c < cycles; ++c) {
        rotated[dst * cycles + c] = cells[p * cycles + c];
      }
    }
    cells = std::move(rotated);
  }

  return PrpdSignal(std::move(id), phases, cycles, std::move(cells), label);
}

Dataset generate_corpus(const SyntheticSpec& spec) {
  Dataset dataset;
  std::size_t global_index = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    const auto label = static_cast<PdLabel>(k);
    const ClassProfile& profile = spec.profiles[k];
    for (std::size_t i = 0; i < spec.counts[k]; ++i, ++global_index) {
      char id[32];
      std::snprintf(id, sizeof(id), "%s_%04zu", label_name(label), i);
      dataset.samples.push_back(
          generate_sample(label, profile, spec.dims,
                          derive_seed(spec.master_seed, global_index), id));
    }
  }
  return dataset;
}

}  // namespace pdclass
