#include <fstream>

#include "cli/commands.hpp"
#include "hotspot/common/error.hpp"
#include "hotspot/metrics/predictions.hpp"
#include "hotspot/metrics/roc.hpp"

namespace hotspot::cli {

namespace fs = std::filesystem;

Command evaluate_command() {
  Command c;
  c.name = "evaluate";
  c.summary = "classification metrics and ROC from predictions.csv";
  c.fields = {
      {"preds", Kind::kString, "", "predictions.csv (id,label,p0,p1)"},
      {"labels", Kind::kString, "", "manifest.csv holding the true labels"},
  };
  c.plan = [](const nlohmann::json& cfg) -> Job {
    const fs::path preds = existing_file(cfg, "preds");
    const fs::path labels = existing_file(cfg, "labels");
    return [preds, labels](const fs::path& out) {
      const auto rows = metrics::read_predictions(preds);
      const metrics::Evaluation ev = metrics::evaluate_predictions(rows, truth_from_manifest(labels));
      nlohmann::json j = metrics::to_json(ev.report);
      j["n"] = rows.size();
      write_json(out / "metrics.json", j);
      if (ev.roc) metrics::write_roc_csv(out / "roc.csv", *ev.roc);
      return j;
    };
  };
  return c;
}

Command ablate_command() {
  Command c;
  c.name = "ablate";
  c.summary = "metrics table over several prediction files";
  c.fields = {
      {"runs", Kind::kString, "", "name=predictions.csv pairs, comma-separated"},
      {"labels", Kind::kString, "", "manifest.csv holding the true labels"},
  };
  c.plan = [](const nlohmann::json& cfg) -> Job {
    std::vector<metrics::AblationRun> runs;
    for (const auto& item : split_list(cfg.at("runs").get<std::string>())) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
        throw UsageError("--runs entry '" + item + "' is not name=path");
      }
      runs.push_back({item.substr(0, eq), item.substr(eq + 1)});
    }
    if (runs.empty()) throw UsageError("--runs is required");
    const fs::path labels = existing_file(cfg, "labels");
    return [runs, labels](const fs::path& out) {
      const auto table = metrics::ablation_report(runs, truth_from_manifest(labels));
      std::ofstream md(out / "ablation.md");
      md << metrics::render_ablation_markdown(table);
      if (!md) throw IoError("cannot write ablation.md");
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : table) rows.push_back({{"name", r.name}, {"metrics", metrics::to_json(r.report)}});
      write_json(out / "ablation.json", rows);
      return nlohmann::json{{"runs", table.size()}};
    };
  };
  return c;
}

}  // namespace hotspot::cli
