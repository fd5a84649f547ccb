#include "cli/dispatch.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/run_dir.hpp"
#include "hotspot/common/error.hpp"

namespace hotspot::cli {

namespace {

bool g_quiet = false;

void error_record(std::ostream& err, int code, const std::string& kind,
                  const std::string& subcommand, const std::string& message) {
  nlohmann::json j = {{"error",
                       {{"code", code},
                        {"kind", kind},
                        {"subcommand", subcommand},
                        {"message", message}}}};
  err << j.dump() << '\n';
}

std::string top_usage() {
  std::ostringstream s;
  s << "usage: hotspot <subcommand> [--config FILE] [options]\n\nsubcommands:\n";
  for (const auto& c : commands()) {
    s << "  " << c.name << std::string(12 - std::min<std::size_t>(11, c.name.size()), ' ')
      << c.summary << '\n';
  }
  s << "\nRun 'hotspot <subcommand> --help' for its options.\n";
  return s.str();
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = {
      gen_data_command(), train_ssl_command(), finetune_command(), classify_command(),
      isolate_command(),  baseline_command(),  evaluate_command(), ablate_command(),
  };
  return all;
}

void log_line(const std::string& text) {
  if (!g_quiet) std::cerr << text << '\n';
}

int dispatch(int argc, const char* const* argv) { return dispatch(argc, argv, std::cout, std::cerr); }

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  if (argc < 2) {
    err << top_usage();
    error_record(err, 2, "usage", "", "missing subcommand");
    return 2;
  }
  const std::string name = argv[1];
  if (name == "-h" || name == "--help" || name == "help") {
    out << top_usage();
    return 0;
  }
  const Command* cmd = nullptr;
  for (const auto& c : commands()) {
    if (c.name == name) cmd = &c;
  }
  if (!cmd) {
    error_record(err, 2, "usage", name, "unknown subcommand '" + name + "'");
    return 2;
  }

  std::vector<Field> schema = cmd->fields;
  for (auto& f : common_fields()) schema.push_back(f);

  CLI::App app(cmd->summary, "hotspot " + cmd->name);
  std::string config_file;
  app.add_option("--config", config_file, "JSON config file; flags override its values");
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& f : schema) {
    std::string help = f.help;
    if (!f.fallback.is_null()) help += " [" + f.fallback.dump() + "]";
    opts[f.key] = app.add_option(flag_name(f.key), raw[f.key], help);
  }

  app.allow_extras();
  try {
    app.parse(argc - 1, argv + 1);
    const auto extras = app.remaining();
    if (!extras.empty()) {
      const auto flag = std::find_if(extras.begin(), extras.end(),
                                     [](const std::string& a) { return a.rfind("--", 0) == 0; });
      const std::string what = flag != extras.end() ? "unknown option " + *flag
                                                    : "unexpected argument '" + extras.front() + "'";
      error_record(err, 2, "usage", name, what);
      return 2;
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    error_record(err, 2, "usage", name, e.what());
    return 2;
  }

  nlohmann::json cfg;
  Job job;
  std::string run_name;
  std::filesystem::path out_root;
  try {
    std::vector<std::pair<std::string, std::string>> flags;
    for (const auto& f : schema) {
      if (opts[f.key]->count() > 0) flags.emplace_back(f.key, raw[f.key]);
    }
    std::optional<std::filesystem::path> file;
    if (!config_file.empty()) file = config_file;
    cfg = resolve_config(schema, file, flags);
    g_quiet = cfg.at("quiet").get<bool>();
    if (cfg.at("seed").get<long long>() < 0) throw UsageError("--seed must be non-negative");
    out_root = cfg.at("out_root").get<std::string>();
    if (const char* env = std::getenv("HOTSPOT_OUT_ROOT"); env && *env && opts["out_root"]->count() == 0) {
      out_root = env;
    }
    run_name = cfg.at("run_name").get<std::string>();
    if (run_name.empty()) run_name = default_run_name(name, cfg.at("seed").get<std::uint64_t>());
    job = cmd->plan(cfg);
  } catch (const std::exception& e) {
    error_record(err, 2, "usage", name, e.what());
    return 2;
  }

  try {
    StagedRun run(out_root, run_name);
    nlohmann::json resolved = cfg;
    resolved["run_name"] = run_name;
    resolved["out_root"] = out_root.string();
    resolved["subcommand"] = name;
    write_json(run.staging() / "config.json", resolved);
    nlohmann::json summary = job(run.staging());
    run.commit();
    out << nlohmann::json{{"status", "ok"},
                          {"subcommand", name},
                          {"run_dir", run.final_path().string()},
                          {"summary", summary}}
               .dump()
        << '\n';
    return 0;
  } catch (const ValidationError& e) {
    error_record(err, 1, "validation", name, e.what());
  } catch (const IngestionError& e) {
    error_record(err, 1, "ingestion", name, e.what());
  } catch (const NumericDomainError& e) {
    error_record(err, 1, "numeric", name, e.what());
  } catch (const SegmentationFailure& e) {
    error_record(err, 1, "segmentation", name, e.what());
  } catch (const IoError& e) {
    error_record(err, 1, "io", name, e.what());
  } catch (const std::exception& e) {
    error_record(err, 1, "runtime", name, e.what());
  }
  return 1;
}

}  // namespace hotspot::cli
