#include "dataset_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace pdclass {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Trim to the shortest representation that still parses back exactly.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  const SignalDims dims = dataset.dims();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);

  out << "id,label";
  const std::size_t n_values = dims.phases * dims.cycles;
  for (std::size_t i = 0; i < n_values; ++i) out << ",v" << i;
  out << "\n";

  for (const auto& s : dataset.samples) {
    out << s.id() << ",";
    if (s.label()) out << label_name(*s.label());
    for (double v : s.values()) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

Dataset load_dataset(const std::string& path, bool expect_labels,
                     const SignalDims& dims) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);

  const std::size_t n_values = dims.phases * dims.cycles;
  const std::size_t n_cols = n_values + 2;

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  auto header = split_line(line);
  if (header.size() != n_cols || header[0] != "id" || header[1] != "label") {
    throw IoError("bad header in " + path + ": expected " +
                  std::to_string(n_cols) + " columns (id,label,v0..v" +
                  std::to_string(n_values - 1) + "), got " +
                  std::to_string(header.size()));
  }

  Dataset dataset;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_line(line);
    const std::string where = path + " line " + std::to_string(line_no);
    if (fields.size() != n_cols) {
      throw ValidationError(where + ": expected " + std::to_string(n_cols) +
                            " columns, got " + std::to_string(fields.size()));
    }

    std::optional<PdLabel> label;
    if (!fields[1].empty()) {
      label = parse_label(fields[1]);
      if (!label) {
        throw ValidationError(where + ": unknown label '" + fields[1] + "'");
      }
    } else if (expect_labels) {
      throw ValidationError(where + ": missing label");
    }

    std::vector<double> values(n_values);
    for (std::size_t i = 0; i < n_values; ++i) {
      const std::string& f = fields[i + 2];
      char* end = nullptr;
      values[i] = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size()) {
        throw ValidationError(where + ": bad value '" + f + "' in column v" +
                              std::to_string(i));
      }
    }

    PrpdSignal signal(fields[0], dims.phases, dims.cycles, std::move(values),
                      label);
    auto check = validate_signal(signal, dims);
    if (!check.ok) throw ValidationError(where + ": " + check.message);
    dataset.samples.push_back(std::move(signal));
  }
  return dataset;
}

}  // namespace pdclass
