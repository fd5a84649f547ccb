#include "cli/run_dir.hpp"

#include <unistd.h>

#include <chrono>
#include <ctime>

#include "hotspot/common/error.hpp"

namespace hotspot::cli {

namespace fs = std::filesystem;

std::string default_run_name(const std::string& subcommand, std::uint64_t seed) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &utc);
  return subcommand + "-" + stamp + "-" + std::to_string(seed);
}

StagedRun::StagedRun(const fs::path& out_root, const std::string& run_name)
    : final_(out_root / run_name),
      staging_(out_root / ("." + run_name + ".partial-" + std::to_string(::getpid()))) {
  if (run_name.empty() || run_name.find('/') != std::string::npos || run_name == "." ||
      run_name == "..") {
    throw ValidationError("invalid run name '" + run_name + "'");
  }
  if (fs::exists(final_)) throw IoError("run directory '" + final_.string() + "' already exists");
  std::error_code ec;
  fs::remove_all(staging_, ec);
  fs::create_directories(staging_, ec);
  if (ec) throw IoError("cannot create '" + staging_.string() + "': " + ec.message());
}

StagedRun::~StagedRun() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void StagedRun::commit() {
  std::error_code ec;
  fs::rename(staging_, final_, ec);
  if (ec) throw IoError("cannot move outputs to '" + final_.string() + "': " + ec.message());
  committed_ = true;
}

}  // namespace hotspot::cli
