#include <cstdio>
#include <fstream>

#include "cli/commands.hpp"
#include "hotspot/common/error.hpp"
#include "hotspot/metrics/dice.hpp"

namespace hotspot::cli {

namespace fs = std::filesystem;

DatasetRef dataset_ref(const nlohmann::json& cfg, const std::string& root_key,
                       const std::string& manifest_key) {
  DatasetRef ref;
  ref.root = cfg.at(root_key).get<std::string>();
  if (ref.root.empty()) throw UsageError(flag_name(root_key) + " is required");
  if (!fs::is_directory(ref.root)) {
    throw UsageError(flag_name(root_key) + ": '" + ref.root.string() + "' is not a directory");
  }
  const std::string manifest = cfg.at(manifest_key).get<std::string>();
  ref.manifest = manifest.empty() ? ref.root / "manifest.csv" : fs::path(manifest);
  if (!fs::is_regular_file(ref.manifest)) {
    throw UsageError("manifest '" + ref.manifest.string() + "' not found");
  }
  return ref;
}

fs::path existing_file(const nlohmann::json& cfg, const std::string& key) {
  const fs::path p = cfg.at(key).get<std::string>();
  if (p.empty()) throw UsageError(flag_name(key) + " is required");
  if (!fs::is_regular_file(p)) throw UsageError(flag_name(key) + ": '" + p.string() + "' not found");
  return p;
}

metrics::TruthTable truth_from_manifest(const fs::path& manifest) {
  metrics::TruthTable truth;
  for (const auto& row : data::read_manifest(manifest)) {
    if (row.label) truth[fs::path(row.path).stem().string()] = data::to_int(*row.label);
  }
  return truth;
}

nlohmann::json write_dice_report(const fs::path& dir, const std::vector<DiceRow>& rows) {
  std::ofstream out(dir / "dice_report.csv");
  out << "id,dice,status\n";
  std::vector<double> values;
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.10g", r.dice);
    out << r.id << ',' << buf << ',' << r.status << '\n';
    values.push_back(r.dice);
  }
  if (!out) throw IoError("cannot write dice_report.csv");
  nlohmann::json summary = {{"count", rows.size()}};
  if (!values.empty()) {
    const auto s = metrics::dice_summary(values);
    summary["mean"] = s.mean;
    summary["std"] = s.std;
    summary["formatted"] = metrics::format_summary(s);
  }
  write_json(dir / "dice_summary.json", summary);
  return summary;
}

std::vector<data::ThermalImage> select_subset(std::vector<data::ThermalImage> images,
                                              const std::string& subset) {
  if (subset == "all") return images;
  std::vector<data::ThermalImage> out;
  for (auto& img : images) {
    if (img.label == data::Label::kAnomalous) out.push_back(std::move(img));
  }
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace hotspot::cli
