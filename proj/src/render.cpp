#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "errors.hpp"

namespace pdclass {

std::string render_pgm(const PrpdSignal& signal) {
  const ValidationResult check = validate_signal(signal);
  if (!check.ok) throw ValidationError(check.message);

  double peak = 0.0;
  for (double v : signal.values()) peak = std::max(peak, v);

  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%zu %zu\n255\n", signal.cycles(),
                signal.phases());
  std::string out(header);
  out.reserve(out.size() + signal.values().size());
  for (std::size_t p = 0; p < signal.phases(); ++p) {
    for (std::size_t c = 0; c < signal.cycles(); ++c) {
      const double v = peak > 0.0 ? signal.at(p, c) / peak : 0.0;
      const long level = std::lround(255.0 * v);
      out.push_back(static_cast<char>(std::clamp(level, 0L, 255L)));
    }
  }
  return out;
}

void save_pgm(const PrpdSignal& signal, const std::string& path) {
  const std::string image = render_pgm(signal);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file '" + path + "' for writing");
  out.write(image.data(), static_cast<std::streamsize>(image.size()));
  if (!out) throw IoError("failed writing image to '" + path + "'");
}

}  // namespace pdclass
