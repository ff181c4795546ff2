#pragma once

#include <string>

#include "types.hpp"

namespace pdclass {

// Binary portable graymap (P5) heatmap: one row per phase (height P), one
// column per cycle (width C), intensity = round(255 * v / sample max).
// A zero signal renders all black.
std::string render_pgm(const PrpdSignal& signal);

void save_pgm(const PrpdSignal& signal, const std::string& path);

}  // namespace pdclass
