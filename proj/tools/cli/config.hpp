#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hotspot::cli {

// Bad command line or configuration; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { kInt, kNumber, kString, kBool };

struct Field {
  std::string key;
  Kind kind;
  nlohmann::json fallback;  // null = required
  std::string help;
};

// Keys every subcommand accepts.
std::vector<Field> common_fields();

// Merges defaults, an optional JSON config file and flag overrides (raw
// strings keyed like the schema). Unknown keys and ill-typed values throw
// UsageError naming the key.
nlohmann::json resolve_config(const std::vector<Field>& schema,
                              const std::optional<std::filesystem::path>& file,
                              const std::vector<std::pair<std::string, std::string>>& flags);

// "--n-images" for "n_images".
std::string flag_name(const std::string& key);

// Comma-separated lists used by a few flags.
std::vector<double> parse_numbers(const std::string& text, std::size_t expected,
                                  const std::string& key);
std::vector<std::string> split_list(const std::string& text);

}  // namespace hotspot::cli
