#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace testutil {

inline pdclass::PrpdSignal make_signal(
    std::size_t phases, std::size_t cycles, std::vector<double> values,
    std::optional<pdclass::PdLabel> label = {}, std::string id = "s") {
  return pdclass::PrpdSignal(std::move(id), phases, cycles, std::move(values),
                             label);
}

// Uniform [0, 1) magnitudes with roughly zero_fraction of the cells empty.
inline pdclass::PrpdSignal random_signal(std::size_t phases,
                                         std::size_t cycles, pdclass::Rng& rng,
                                         double zero_fraction) {
  std::vector<double> values(phases * cycles, 0.0);
  for (double& v : values) {
    if (rng.uniform() >= zero_fraction) v = rng.uniform();
  }
  return pdclass::PrpdSignal("r", phases, cycles, std::move(values));
}

// Output phase (p + shift) mod P holds input phase p; cycles untouched.
inline pdclass::PrpdSignal rotate_signal(const pdclass::PrpdSignal& s,
                                         std::size_t shift) {
  const std::size_t phases = s.phases();
  const std::size_t cycles = s.cycles();
  std::vector<double> values(phases * cycles);
  for (std::size_t p = 0; p < phases; ++p) {
    const std::size_t q = (p + shift) % phases;
    for (std::size_t c = 0; c < cycles; ++c) {
      values[q * cycles + c] = s.at(p, c);
    }
  }
  return pdclass::PrpdSignal(s.id(), phases, cycles, std::move(values),
                             s.label());
}

inline bool close_rel(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Rows must be nonnegative and sum to 1 within 1e-9.
inline bool is_simplex(const pdclass::Matrix& proba) {
  if (proba.cols() != static_cast<std::size_t>(pdclass::kNumClasses)) {
    return false;
  }
  for (std::size_t r = 0; r < proba.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < proba.cols(); ++c) {
      const double v = proba.at(r, c);
      if (!(v >= 0.0)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) return false;
  }
  return true;
}

// Unique scratch directory, removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<std::uint64_t> counter{0};
    const auto tag = pdclass::splitmix64(
        static_cast<std::uint64_t>(
            std::chrono::steady_clock::now().time_since_epoch().count()) +
        counter.fetch_add(1));
    path = std::filesystem::temp_directory_path() /
           ("pdclass_test_" + std::to_string(tag));
    std::filesystem::create_directories(path);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace testutil
