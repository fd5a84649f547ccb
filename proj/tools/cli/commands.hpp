#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "hotspot/data/dataset.hpp"
#include "hotspot/metrics/ablation.hpp"
#include "hotspot/ssl/model.hpp"

namespace hotspot::cli {

// Writes into the given directory and returns a summary printed on success.
using Job = std::function<nlohmann::json(const std::filesystem::path& out_dir)>;

struct Command {
  std::string name;
  std::string summary;
  std::vector<Field> fields;
  // Checks the resolved config and returns the work to run. Anything thrown
  // here is reported as a usage error.
  std::function<Job(const nlohmann::json& cfg)> plan;
};

const std::vector<Command>& commands();

Command gen_data_command();
Command train_ssl_command();
Command finetune_command();
Command classify_command();
Command isolate_command();
Command baseline_command();
Command evaluate_command();
Command ablate_command();

// Helpers shared by the subcommands.
std::vector<Field> encoder_fields();
ssl::EncoderConfig encoder_config(const nlohmann::json& cfg);
struct DatasetRef {
  std::filesystem::path root;
  std::filesystem::path manifest;
};
// Reads cfg[root_key] and cfg[manifest_key] (empty manifest = <root>/manifest.csv)
// and checks both exist.
DatasetRef dataset_ref(const nlohmann::json& cfg, const std::string& root_key = "data",
                       const std::string& manifest_key = "manifest");
std::filesystem::path existing_file(const nlohmann::json& cfg, const std::string& key);
// id (file stem) → label for every labelled manifest row.
metrics::TruthTable truth_from_manifest(const std::filesystem::path& manifest);
struct DiceRow {
  std::string id;
  double dice = 0;
  std::string status = "ok";
};
// dice_report.csv (id,dice,status) plus dice_summary.json; returns the summary.
nlohmann::json write_dice_report(const std::filesystem::path& dir, const std::vector<DiceRow>& rows);
// Images to segment: "anomalous" keeps labelled anomalous images, "all" keeps
// everything.
std::vector<data::ThermalImage> select_subset(std::vector<data::ThermalImage> images,
                                              const std::string& subset);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void log_line(const std::string& text);

}  // namespace hotspot::cli
