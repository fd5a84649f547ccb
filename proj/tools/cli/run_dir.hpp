#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace hotspot::cli {

// "<subcommand>-<YYYYmmddTHHMMSSZ>-<seed>".
std::string default_run_name(const std::string& subcommand, std::uint64_t seed);

// Outputs are written into a hidden sibling directory and renamed into place
// by commit(). Anything not committed is removed on destruction.
class StagedRun {
 public:
  StagedRun(const std::filesystem::path& out_root, const std::string& run_name);
  ~StagedRun();
  StagedRun(const StagedRun&) = delete;
  StagedRun& operator=(const StagedRun&) = delete;

  [[nodiscard]] const std::filesystem::path& staging() const { return staging_; }
  [[nodiscard]] const std::filesystem::path& final_path() const { return final_; }
  void commit();

 private:
  std::filesystem::path final_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

}  // namespace hotspot::cli
