#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "hotspot/common/error.hpp"
#include "hotspot/metrics/ablation.hpp"
#include "hotspot/metrics/classification.hpp"
#include "hotspot/metrics/dice.hpp"
#include "hotspot/metrics/predictions.hpp"
#include "hotspot/metrics/roc.hpp"
#include "oracles.hpp"

using namespace hotspot;
using namespace hotspot::metrics;

namespace {

double round2(double v) { return std::round(v * 100) / 100; }

std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Confusion, ReferenceRowAfterRounding) {
  const MetricsReport r = confusion_metrics(ConfusionCounts{47, 50, 0, 3});
  EXPECT_EQ(round2(r.accuracy), 0.97);
  EXPECT_EQ(round2(r.precision), 1.00);
  EXPECT_EQ(round2(r.sensitivity), 0.94);
  EXPECT_EQ(round2(r.specificity), 1.00);
  EXPECT_EQ(round2(r.f_score), 0.97);
  EXPECT_NEAR(r.f_score, 0.969, 5e-4);
}

TEST(Confusion, ScalarExample) {
  const MetricsReport r = confusion_metrics(ConfusionCounts{30, 20, 10, 40});
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_NEAR(r.sensitivity, 0.4286, 5e-5);
  EXPECT_NEAR(r.specificity, 0.6667, 5e-5);
  EXPECT_NEAR(r.f_score, 0.5455, 5e-5);
  EXPECT_DOUBLE_EQ(r.f_score, 30.0 / (30.0 + 50.0 / 2));
}

TEST(Confusion, PerfectAndZeroDenominator) {
  std::vector<int> y{0, 1, 1, 0, 1};
  const MetricsReport p = confusion_metrics(y, y);
  for (double v : {p.accuracy, p.precision, p.sensitivity, p.specificity, p.f_score}) EXPECT_EQ(v, 1.0);
  std::vector<int> zeros(5, 0);
  const MetricsReport z = confusion_metrics(y, zeros);
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_TRUE(z.precision_undefined);
  EXPECT_FALSE(z.specificity_undefined);
  EXPECT_TRUE(to_json(z).at("undefined").at("precision").get<bool>());
  std::vector<int> empty;
  EXPECT_THROW(confusion_metrics(empty, empty), ValidationError);
  std::vector<int> bad{2};
  std::vector<int> one{1};
  EXPECT_THROW(confusion_metrics(bad, one), ValidationError);
}

TEST(Confusion, IdentitiesPermutationAndDuality) {
  std::mt19937_64 g(41);
  std::bernoulli_distribution b(0.5);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> y(30), p(30);
    for (std::size_t i = 0; i < 30; ++i) {
      y[i] = b(g);
      p[i] = b(g);
    }
    const MetricsReport r = confusion_metrics(y, p);
    const auto& c = r.counts;
    EXPECT_EQ(c.total(), 30);
    EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(c.tp + c.tn) / 30.0);
    if (c.tp + c.fn > 0) EXPECT_DOUBLE_EQ(r.sensitivity * static_cast<double>(c.tp + c.fn), static_cast<double>(c.tp));

    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    std::vector<int> ys, ps;
    for (auto i : perm) {
      ys.push_back(y[i]);
      ps.push_back(p[i]);
    }
    EXPECT_EQ(to_json(confusion_metrics(ys, ps)), to_json(r));

    std::vector<int> ny, np;
    for (std::size_t i = 0; i < 30; ++i) {
      ny.push_back(1 - y[i]);
      np.push_back(1 - p[i]);
    }
    EXPECT_DOUBLE_EQ(r.specificity, confusion_metrics(ny, np).sensitivity);
  }
}

TEST(Roc, Examples) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y{0, 0, 1, 1};
  const RocResult r = auc_roc(s, y);
  EXPECT_DOUBLE_EQ(r.auc, 0.75);
  EXPECT_EQ(r.curve.front().fpr, 0.0);
  EXPECT_EQ(r.curve.front().tpr, 0.0);
  EXPECT_TRUE(std::isinf(r.curve.front().threshold));
  EXPECT_EQ(r.curve.back().fpr, 1.0);
  EXPECT_EQ(r.curve.back().tpr, 1.0);
  const std::vector<double> sep{0.1, 0.2, 0.8, 0.9}, flat(4, 0.3);
  EXPECT_DOUBLE_EQ(auc_roc(sep, y).auc, 1.0);
  EXPECT_DOUBLE_EQ(auc_roc(flat, y).auc, 0.5);
  const std::vector<int> single(4, 1);
  EXPECT_THROW(auc_roc(s, single), ValidationError);
}

TEST(Roc, MatchesMannWhitneyExactly) {
  std::mt19937_64 g(42);
  std::uniform_int_distribution<int> n(2, 25), level(0, 9);
  std::bernoulli_distribution b(0.5);
  for (int t = 0; t < 200; ++t) {
    const int m = n(g);
    std::vector<double> s;
    std::vector<int> y;
    for (int i = 0; i < m; ++i) {
      s.push_back(level(g) / 10.0);  // coarse grid forces ties
      y.push_back(b(g));
    }
    y[0] = 0;
    y[1] = 1;
    EXPECT_EQ(auc_roc(s, y).auc, oracle::ref_mann_whitney(s, y)) << t;
  }
}

TEST(Roc, CsvHasInfiniteEndpoints) {
  const auto dir = temp_dir("hotspot_roc_test");
  const std::vector<double> s{0.2, 0.7};
  const std::vector<int> y{0, 1};
  write_roc_csv(dir / "roc.csv", auc_roc(s, y));
  std::ifstream in(dir / "roc.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "threshold,fpr,tpr");
  EXPECT_EQ(first.substr(0, 4), "inf,");
  std::filesystem::remove_all(dir);
}

TEST(DiceSummary, Examples) {
  const std::vector<double> one{0.7}, two{0.6, 0.8};
  EXPECT_DOUBLE_EQ(dice_summary(one).mean, 0.7);
  EXPECT_DOUBLE_EQ(dice_summary(one).std, 0.0);
  EXPECT_NEAR(dice_summary(two).mean, 0.7, 1e-15);
  EXPECT_NEAR(dice_summary(two).std, 0.1, 1e-15);
  EXPECT_EQ(format_summary(dice_summary(two), 1, 1), "0.7±0.1");
  EXPECT_EQ(format_summary(DiceSummary{0.7359, 0.10, 12}), "0.7359±0.10");
  EXPECT_EQ(format_summary(dice_summary(one), 1, 1), "0.7±0.0");
}

TEST(Predictions, RoundTripAndValidation) {
  const auto dir = temp_dir("hotspot_pred_test");
  const std::vector<PredictionRow> rows{{"a", 1, 0.25, 0.75}, {"b", 0, 0.9, 0.1}};
  write_predictions(dir / "p.csv", rows);
  const auto back = read_predictions(dir / "p.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, "a");
  EXPECT_EQ(back[1].p0, 0.9);
  std::ofstream(dir / "bad.csv") << "id,label,p0,p1\na,1,0.2,0.8\nb,x,0.5,0.5\n";
  try {
    read_predictions(dir / "bad.csv");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Ablation, RowsRecomputeIndependently) {
  const auto dir = temp_dir("hotspot_ablation_test");
  std::mt19937_64 g(43);
  std::uniform_real_distribution<double> u(0, 1);
  TruthTable truth;
  for (int i = 0; i < 20; ++i) truth["img" + std::to_string(i)] = i % 2;
  std::vector<AblationRun> runs;
  std::vector<std::vector<PredictionRow>> all;
  for (const std::string name : {"full", "no_ce", "no_ensemble", "tiny"}) {
    std::vector<PredictionRow> rows;
    for (const auto& [id, label] : truth) {
      const double p1 = u(g);
      rows.push_back({id, p1 > 0.5 ? 1 : 0, 1 - p1, p1});
    }
    write_predictions(dir / (name + ".csv"), rows);
    runs.push_back({name, dir / (name + ".csv")});
    all.push_back(rows);
  }
  const auto table = ablation_report(runs, truth);
  ASSERT_EQ(table.size(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(table[r].name, runs[r].name);
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (const auto& row : all[r]) {
      const int y = truth.at(row.id);
      tp += y == 1 && row.label == 1;
      tn += y == 0 && row.label == 0;
      fp += y == 0 && row.label == 1;
      fn += y == 1 && row.label == 0;
    }
    EXPECT_EQ(table[r].report.counts.tp, tp);
    EXPECT_DOUBLE_EQ(table[r].report.accuracy, static_cast<double>(tp + tn) / 20.0);
    EXPECT_DOUBLE_EQ(table[r].report.f_score, static_cast<double>(tp) / (static_cast<double>(tp) + static_cast<double>(fp + fn) / 2));
  }
  const std::string md = render_ablation_markdown({table[0]});
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n'), 3);
  EXPECT_NE(md.find("| full |"), std::string::npos);

  runs.push_back({"ghost", dir / "ghost.csv"});
  try {
    ablation_report(runs, truth);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Evaluate, AucUsesAnomalyProbability) {
  TruthTable truth{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
  std::vector<PredictionRow> rows{{"a", 0, 0.9, 0.1}, {"b", 0, 0.6, 0.4}, {"c", 0, 0.65, 0.35}, {"d", 1, 0.2, 0.8}};
  const Evaluation e = evaluate_predictions(rows, truth);
  ASSERT_TRUE(e.roc.has_value());
  EXPECT_DOUBLE_EQ(e.roc->auc, 0.75);
  EXPECT_DOUBLE_EQ(*e.report.auc, 0.75);
  rows.push_back({"zz", 0, 0.5, 0.5});
  EXPECT_THROW(evaluate_predictions(rows, truth), ValidationError);
}
