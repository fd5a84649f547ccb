#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "cli/dispatch.hpp"
#include "cli/run_dir.hpp"
#include "hotspot/common/error.hpp"

using namespace hotspot::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::vector<const char*> argv{"hotspot"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("hotspot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
  }

  fs::path root_;
};

}  // namespace

TEST_F(CliTest, EvaluateWritesMetrics) {
  write(root_ / "preds.csv", "id,label,p0,p1\na,1,0.2,0.8\nb,0,0.9,0.1\nc,1,0.4,0.6\nd,1,0.7,0.3\n");
  write(root_ / "manifest.csv", "path,label\nimages/a.png,1\nimages/b.png,0\nimages/c.png,1\n"
                                "images/d.png,0\n");
  const auto r = run({"evaluate", "--preds", (root_ / "preds.csv").string(), "--labels",
                      (root_ / "manifest.csv").string(), "--out-root", (root_ / "out").string(),
                      "--run-name", "ev"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto status = nlohmann::json::parse(r.out);
  EXPECT_EQ(status.at("status"), "ok");
  std::ifstream in(root_ / "out" / "ev" / "metrics.json");
  const auto m = nlohmann::json::parse(in);
  EXPECT_DOUBLE_EQ(m.at("accuracy").get<double>(), 0.75);
  EXPECT_DOUBLE_EQ(m.at("auc").get<double>(), 1.0);
  EXPECT_EQ(m.at("n"), 4);
  EXPECT_TRUE(fs::exists(root_ / "out" / "ev" / "roc.csv"));
  EXPECT_TRUE(fs::exists(root_ / "out" / "ev" / "config.json"));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  auto r = run({"evaluate", "--bogus", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos);
  r = run({"no-such-command"});
  EXPECT_EQ(r.code, 2);
  r = run({"gen-data", "--n-images", "many", "--out-root", root_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--n-images"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(root_));
}

TEST_F(CliTest, RuntimeFailureLeavesNothingBehind) {
  write(root_ / "preds.csv", "id,label,p0,p1\na,1,0.2,0.8\nbroken\n");
  write(root_ / "manifest.csv", "path,label\nimages/a.png,1\n");
  const auto r = run({"evaluate", "--preds", (root_ / "preds.csv").string(), "--labels",
                      (root_ / "manifest.csv").string(), "--out-root", (root_ / "out").string(),
                      "--run-name", "ev"});
  EXPECT_EQ(r.code, 1);
  const auto err = nlohmann::json::parse(r.err);
  EXPECT_EQ(err.at("error").at("subcommand"), "evaluate");
  ASSERT_TRUE(fs::exists(root_ / "out"));
  EXPECT_TRUE(fs::is_empty(root_ / "out"));
}

TEST_F(CliTest, ExistingRunIsNotOverwritten) {
  const auto args = std::vector<std::string>{"gen-data", "--n-images", "2", "--height", "32",
                                             "--width", "32", "--out-root", root_.string(),
                                             "--run-name", "d"};
  ASSERT_EQ(run(args).code, 0);
  const auto before = fs::last_write_time(root_ / "d" / "manifest.csv");
  EXPECT_EQ(run(args).code, 1);
  EXPECT_EQ(fs::last_write_time(root_ / "d" / "manifest.csv"), before);
}

TEST(Config, MergeOrder) {
  std::vector<Field> schema = common_fields();
  schema.push_back({"k", Kind::kInt, 3, ""});
  schema.push_back({"name", Kind::kString, nullptr, ""});
  const fs::path file = fs::temp_directory_path() / "hotspot_cfg_merge.json";
  std::ofstream(file) << R"({"k": 5, "name": "from-file", "seed": 9})";
  auto cfg = resolve_config(schema, file, {{"k", "7"}});
  EXPECT_EQ(cfg.at("k"), 7);
  EXPECT_EQ(cfg.at("name"), "from-file");
  EXPECT_EQ(cfg.at("seed"), 9);
  EXPECT_EQ(cfg.at("quiet"), false);

  EXPECT_THROW(resolve_config(schema, std::nullopt, {}), UsageError);  // name is required
  std::ofstream(file) << R"({"name": "x", "colour": 1})";
  try {
    resolve_config(schema, file, {});
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
  std::ofstream(file) << R"({"name": "x", "k": "five"})";
  EXPECT_THROW(resolve_config(schema, file, {}), UsageError);
  fs::remove(file);
}

TEST(Config, Helpers) {
  EXPECT_EQ(flag_name("n_images"), "--n-images");
  EXPECT_EQ(split_list("a,b,,c"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(parse_numbers("1,2.5", 2, "x"), (std::vector<double>{1, 2.5}));
  EXPECT_THROW(parse_numbers("1,2", 3, "x"), UsageError);
  EXPECT_THROW(parse_numbers("1,q", 2, "x"), UsageError);
}

TEST(RunDir, StagingIsRemovedUnlessCommitted) {
  const fs::path root = fs::temp_directory_path() / "hotspot_stage_test";
  fs::remove_all(root);
  {
    StagedRun run(root, "r1");
    std::ofstream(run.staging() / "x.txt") << "x";
  }
  EXPECT_FALSE(fs::exists(root / "r1"));
  EXPECT_TRUE(fs::is_empty(root));
  {
    StagedRun run(root, "r1");
    std::ofstream(run.staging() / "x.txt") << "x";
    run.commit();
  }
  EXPECT_TRUE(fs::exists(root / "r1" / "x.txt"));
  EXPECT_THROW(StagedRun(root, "r1"), hotspot::IoError);
  EXPECT_THROW(StagedRun(root, "../escape"), hotspot::ValidationError);
  const std::string name = default_run_name("evaluate", 4);
  EXPECT_EQ(name.rfind("evaluate-", 0), 0u);
  EXPECT_EQ(name.substr(name.size() - 2), "-4");
  fs::remove_all(root);
}
