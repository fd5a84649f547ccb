#include "cli/config.hpp"

#include <fstream>
#include <sstream>

namespace hotspot::cli {

namespace {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kInt: return "integer";
    case Kind::kNumber: return "number";
    case Kind::kString: return "string";
    case Kind::kBool: return "boolean";
  }
  return "value";
}

bool matches(Kind k, const nlohmann::json& v) {
  switch (k) {
    case Kind::kInt: return v.is_number_integer();
    case Kind::kNumber: return v.is_number();
    case Kind::kString: return v.is_string();
    case Kind::kBool: return v.is_boolean();
  }
  return false;
}

nlohmann::json convert(const Field& f, const std::string& raw) {
  auto fail = [&] {
    return UsageError("option " + flag_name(f.key) + " expects " + kind_name(f.kind) + ", got '" +
                      raw + "'");
  };
  try {
    std::size_t used = 0;
    switch (f.kind) {
      case Kind::kInt: {
        const long long v = std::stoll(raw, &used);
        if (used != raw.size()) throw fail();
        return v;
      }
      case Kind::kNumber: {
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw fail();
        return v;
      }
      case Kind::kBool:
        if (raw == "true" || raw == "1") return true;
        if (raw == "false" || raw == "0") return false;
        throw fail();
      case Kind::kString: return raw;
    }
  } catch (const std::logic_error&) {
    throw fail();
  }
  throw fail();
}

}  // namespace

std::vector<Field> common_fields() {
  return {
      {"seed", Kind::kInt, 0, "seed for every random generator"},
      {"out_root", Kind::kString, "out", "output root (HOTSPOT_OUT_ROOT overrides the default)"},
      {"run_name", Kind::kString, "", "run directory name; default <subcommand>-<UTC>-<seed>"},
      {"quiet", Kind::kBool, false, "suppress progress lines on stderr"},
  };
}

std::string flag_name(const std::string& key) {
  std::string out = "--" + key;
  for (char& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

nlohmann::json resolve_config(const std::vector<Field>& schema,
                              const std::optional<std::filesystem::path>& file,
                              const std::vector<std::pair<std::string, std::string>>& flags) {
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& f : schema) {
    if (!f.fallback.is_null()) cfg[f.key] = f.fallback;
  }
  auto find = [&](const std::string& key) -> const Field* {
    for (const auto& f : schema) {
      if (f.key == key) return &f;
    }
    return nullptr;
  };

  if (file) {
    std::ifstream in(*file);
    if (!in) throw UsageError("cannot read config file '" + file->string() + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file '" + file->string() + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      const Field* f = find(key);
      if (!f) throw UsageError("unknown config key '" + key + "'");
      if (!matches(f->kind, value)) {
        throw UsageError("config key '" + key + "' expects " + kind_name(f->kind));
      }
      cfg[key] = value;
    }
  }
  for (const auto& [key, raw] : flags) {
    const Field* f = find(key);
    if (!f) throw UsageError("unknown option " + flag_name(key));
    cfg[key] = convert(*f, raw);
  }
  for (const auto& f : schema) {
    if (!cfg.contains(f.key)) throw UsageError("missing required option " + flag_name(f.key));
  }
  return cfg;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected,
                                  const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(flag_name(key) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw UsageError(flag_name(key) + " expects " + std::to_string(expected) +
                     " comma-separated numbers");
  }
  return out;
}

}  // namespace hotspot::cli
