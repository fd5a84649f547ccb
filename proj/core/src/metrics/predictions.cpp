#include "hotspot/metrics/predictions.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hotspot/common/error.hpp"

namespace hotspot::metrics {

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "id,label,p0,p1\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), ",%d,%.17g,%.17g\n", r.label, r.p0, r.p1);
    out << r.id << buf;
  }
}

std::vector<PredictionRow> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read predictions file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,label,p0,p1") {
    throw ValidationError("'" + path.string() + "': header must be id,label,p0,p1");
  }
  std::vector<PredictionRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    auto bad = [&](const std::string& why) {
      return ValidationError("'" + path.string() + "' line " + std::to_string(lineno) + ": " + why);
    };
    if (fields.size() != 4) throw bad("expected 4 fields");
    PredictionRow r;
    r.id = fields[0];
    if (fields[1] != "0" && fields[1] != "1") throw bad("label must be 0 or 1");
    r.label = fields[1] == "1";
    try {
      std::size_t used = 0;
      r.p0 = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw bad("p0 is not a number");
      r.p1 = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw bad("p1 is not a number");
    } catch (const std::logic_error&) {
      throw bad("probabilities must be numbers");
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hotspot::metrics
