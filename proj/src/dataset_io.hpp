#pragma once

#include <string>

#include "types.hpp"

namespace pdclass {

// Shortest-faithful decimal formatting (round-trips doubles exactly and is
// byte-stable across runs).
std::string format_double(double v);

// CSV layout: header `id,label,v0,...,v{P*C-1}`, one row per signal, values
// in phase-major order. The label column is empty for unlabeled samples.
void save_dataset(const Dataset& dataset, const std::string& path);

// Loads and validates a dataset against `dims`. With expect_labels set,
// every row must carry a known label token.
Dataset load_dataset(const std::string& path, bool expect_labels,
                     const SignalDims& dims = SignalDims{});

}  // namespace pdclass
