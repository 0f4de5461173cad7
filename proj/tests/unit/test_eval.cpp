#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "tdti/experiment.hpp"
#include "tdti/rating_log.hpp"
#include "tdti/synthetic.hpp"
#include "tdti/tdetect.hpp"

using namespace tdti;

namespace {

InjectionRecord fake_burst(ItemId target, std::size_t n, Timestamp start, std::int64_t first_user = 100000) {
  InjectionRecord rec;
  rec.target = target;
  rec.profile_count = n;
  for (std::size_t p = 0; p < n; ++p) {
    rec.actions.push_back(
        {RatingAction{target, UserId(first_user + static_cast<std::int64_t>(p)), 5, start + static_cast<Timestamp>(p)}, p});
  }
  return rec;
}

const Dataset& small_log() {
  static const Dataset d = filter_sparse_items(generate_synthetic_log(SyntheticLogConfig{150, 120, 6000, 874724710, 60 * 86400, 9}), 10);
  return d;
}

ExperimentProtocol small_protocol() {
  ExperimentProtocol p;
  p.attack_sizes = {10, 30};
  p.items_per_repetition = 8;
  p.repetitions = 3;
  p.seed = 5;
  return p;
}

std::map<std::string, int> count_classes(const std::map<ItemId, ItemClass>& classes) {
  std::map<std::string, int> out;
  for (ItemClass c : kItemClasses) out[std::string(to_string(c))] = 0;
  for (const auto& [item, c] : classes) ++out[std::string(to_string(c))];
  return out;
}

nlohmann::json golden_counts() {
  std::ifstream in(std::string(TDTI_SOURCE_DIR) + "/tests/golden/taxonomy_counts.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Metrics, DetectionRateCountsTargetActionsOnly) {
  const auto rec = fake_burst(ItemId(1), 50, 1000);
  const auto all = rec.target_actions();
  ActionSet flagged(all.begin(), all.end() - 1);
  EXPECT_DOUBLE_EQ(*detection_rate(flagged, rec), 0.98);
  flagged.insert(all.back());
  EXPECT_DOUBLE_EQ(*detection_rate(flagged, rec), 1.0);
  EXPECT_FALSE(detection_rate(flagged, InjectionRecord{}).has_value());
}

TEST(Metrics, FalseAlarmRateOverNormalActions) {
  std::vector<RatingAction> normal;
  for (int k = 0; k < 1000; ++k) normal.push_back(RatingAction{ItemId(1 + k % 4), UserId(k + 1), 3, k * 10});
  const auto rec = fake_burst(ItemId(2), 20, 50);
  auto acts = normal;
  for (const auto& a : rec.all_actions()) acts.push_back(a);
  const Dataset evaluated(acts);

  const auto fakes = rec.all_actions();
  ActionSet flagged(fakes.begin(), fakes.end());
  EXPECT_EQ(false_alarm_rate(flagged, rec, evaluated), 0.0);
  for (int k = 0; k < 28; ++k) flagged.insert(normal[static_cast<std::size_t>(k) * 7]);
  EXPECT_DOUBLE_EQ(false_alarm_rate(flagged, rec, evaluated), 0.028);
  EXPECT_EQ(false_alarm_rate(flagged, rec, Dataset(fakes)), 0.0);
}

TEST(Metrics, CountsAgreeWithRates) {
  const auto h = support::worked_example_history();
  const auto rec = fake_burst(ItemId(7), 30, 2'500'000);
  const auto attacked = inject_into_history(h, rec);
  const auto report = detect_item(attacked, DtiConfig{1400, 2}, Direction::Push);
  const auto list = report.flagged_actions();
  const ActionSet flagged(list.begin(), list.end());
  const auto fakes = rec.target_actions();
  const auto c = count_outcomes(attacked, flagged, ActionSet(fakes.begin(), fakes.end()));
  EXPECT_EQ(c.injected, 30u);
  EXPECT_EQ(c.normal, h.size());
  EXPECT_EQ(c.detection_rate(), detection_rate(flagged, rec));
  EXPECT_DOUBLE_EQ(*c.false_alarm_rate(), false_alarm_rate(flagged, rec, Dataset(attacked.actions())));

  MetricCounts sum;
  sum += c;
  sum += c;
  EXPECT_EQ(sum.injected, 60u);
  EXPECT_EQ(sum.detection_rate(), c.detection_rate());
  EXPECT_FALSE(MetricCounts{}.detection_rate().has_value());
}

TEST(Taxonomy, CornersLandInTheirClasses) {
  std::vector<RatingAction> acts;
  std::int64_t user = 1;
  auto add = [&](std::int64_t item, std::size_t n, Timestamp start, Seconds step) {
    for (std::size_t k = 0; k < n; ++k) {
      acts.push_back(RatingAction{ItemId(item), UserId(user++), 3, start + static_cast<Timestamp>(k) * step});
    }
  };
  const Seconds day = 86400;
  add(1, 10, 50 * day, 600);       // few, tight
  add(2, 40, 50 * day, 150);       // many, tight
  add(3, 10, 0, 10 * day);         // few, spread
  add(4, 40, 0, 100 * day / 40);   // many, spread
  const auto classes = classify_items(Dataset(acts));
  EXPECT_EQ(classes.at(ItemId(1)), ItemClass::Fad);
  EXPECT_EQ(classes.at(ItemId(2)), ItemClass::Fashion);
  EXPECT_EQ(classes.at(ItemId(3)), ItemClass::Style);
  EXPECT_EQ(classes.at(ItemId(4)), ItemClass::Scallop);
}

TEST(Taxonomy, ShapeUsesLowerNearestRank) {
  const auto h = support::history_at({0, 10, 20, 30, 40, 1000});
  // n = 6: ranks floor(0.25 * 5) = 1 and floor(0.75 * 5) = 3.
  const auto s = item_shape(h, 100);
  EXPECT_EQ(s.rating_count, 6u);
  EXPECT_DOUBLE_EQ(s.concentration, 0.2);
}

TEST(Taxonomy, EveryItemGetsExactlyOneClass) {
  const auto& d = small_log();
  const auto classes = classify_items(d);
  EXPECT_EQ(classes.size(), d.item_count());
  for (ItemId item : d.items()) EXPECT_EQ(classes.count(item), 1u);
  EXPECT_TRUE(classify_items(Dataset()).empty());
  for (ItemClass c : kItemClasses) EXPECT_EQ(parse_item_class(to_string(c)), c);
  EXPECT_THROW(parse_item_class("trend"), Error);
}

TEST(Taxonomy, GoldenCountsSynthetic) {
  const auto d = filter_sparse_items(generate_synthetic_log(SyntheticLogConfig{}), 10);
  const auto want = golden_counts().at("synthetic");
  const auto got = count_classes(classify_items(d));
  for (const auto& [name, n] : got) EXPECT_EQ(n, want.at(name).get<int>()) << name;
}

TEST(Taxonomy, GoldenCountsMovieLens) {
  const auto path = support::movielens_path();
  if (!path) GTEST_SKIP() << "MovieLens 100k not found";
  const auto d = filter_sparse_items(read_rating_log(*path, LogFormat::Tsv), 10);
  ASSERT_EQ(d.item_count(), 1152u);
  ASSERT_EQ(d.rating_count(), 97953u);
  const auto want = golden_counts().at("movielens");
  const auto got = count_classes(classify_items(d));
  for (const auto& [name, n] : got) EXPECT_EQ(n, want.at(name).get<int>()) << name;
}

TEST(Experiment, ZeroRepetitionsYieldNoCells) {
  auto p = small_protocol();
  p.repetitions = 0;
  EXPECT_TRUE(run_experiment(small_log(), p).cells.empty());
}

TEST(Experiment, AbsentItemIsAnError) {
  auto p = small_protocol();
  p.items = {ItemId(999999)};
  EXPECT_THROW(run_experiment(small_log(), p), Error);
}

TEST(Experiment, OneCellPerCombination) {
  auto p = small_protocol();
  p.models = {AttackModel::Random, AttackModel::Average};
  p.directions = {Direction::Push, Direction::Nuke};
  p.repetitions = 1;
  const auto r = run_experiment(small_log(), p);
  ASSERT_EQ(r.cells.size(), 2u * 2u * 2u);
  for (const auto& cell : r.cells) {
    ASSERT_EQ(cell.repetitions.size(), 1u);
    EXPECT_EQ(cell.pooled().injected, cell.attack_size * p.items_per_repetition);
  }
}

TEST(Experiment, SameSeedSameOutput) {
  const auto p = small_protocol();
  const auto a = run_experiment(small_log(), p);
  const auto b = run_experiment(small_log(), p);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  std::ostringstream ca;
  std::ostringstream cb;
  write_eval_csv(ca, a);
  write_eval_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());

  auto other = p;
  other.seed = 6;
  EXPECT_NE(to_json(run_experiment(small_log(), other)).dump(), to_json(a).dump());
}

TEST(Experiment, ClassRatesAverageOverRepetitionsWithTheClass) {
  const auto r = run_experiment(small_log(), small_protocol());
  for (const auto& cell : r.cells) {
    for (ItemClass c : kItemClasses) {
      double sum = 0.0;
      int n = 0;
      for (const auto& rep : cell.repetitions) {
        auto it = rep.by_class.find(c);
        if (it == rep.by_class.end() || !it->second.detection_rate()) continue;
        sum += *it->second.detection_rate();
        ++n;
      }
      const auto got = cell.class_detection_rate(c);
      ASSERT_EQ(got.has_value(), n > 0);
      if (n > 0) EXPECT_DOUBLE_EQ(*got, sum / n);
    }
    double sum = 0.0;
    for (const auto& rep : cell.repetitions) sum += *rep.overall.false_alarm_rate();
    EXPECT_DOUBLE_EQ(*cell.false_alarm_rate(), sum / static_cast<double>(cell.repetitions.size()));
  }
}

TEST(Experiment, CsvLayout) {
  const auto r = run_experiment(small_log(), small_protocol());
  std::ostringstream out;
  write_eval_csv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "model,direction,attack_size,filler_size,alpha_hours,beta,item_class,detection_rate,false_alarm_rate");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8) << line;
  }
  EXPECT_EQ(rows, r.cells.size() * 5);
  EXPECT_EQ(out.str().find("random,push,10,0,0.3888888889,10,all,"), out.str().find('\n') + 1);
}

TEST(Experiment, JsonCarriesSchema) {
  const auto j = to_json(run_experiment(small_log(), small_protocol()));
  EXPECT_EQ(j.at("schema"), "tdti.eval");
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("cells").size(), 2u);
  EXPECT_EQ(j.at("protocol").at("seed"), 5);
}

TEST(Experiment, DerivedSeedsDependOnTheKey) {
  EXPECT_EQ(derive_seed(42, {1, 2}), derive_seed(42, {1, 2}));
  EXPECT_NE(derive_seed(42, {1, 2}), derive_seed(42, {2, 1}));
  EXPECT_NE(derive_seed(42, {1}), derive_seed(43, {1}));
}

TEST(Sweep, SingleAlphaMatchesTheExperiment) {
  auto p = default_sweep_protocol();
  p.items_per_repetition = 8;
  p.repetitions = 2;
  const auto rows = sweep_alpha(small_log(), {0.5}, p);
  ASSERT_EQ(rows.size(), 4u);

  auto direct = p;
  direct.dti = DtiConfig::from_hours(0.5, 0);
  const auto r = run_experiment(small_log(), direct);
  ASSERT_EQ(r.cells.size(), 1u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.alpha_hours, 0.5);
    EXPECT_EQ(row.beta, 0u);
    EXPECT_EQ(row.detection_rate, r.cells[0].class_detection_rate(row.item_class));
    EXPECT_EQ(row.false_alarm_rate, r.cells[0].class_false_alarm_rate(row.item_class));
  }
}

TEST(Sweep, HugeAlphaNeverSplits) {
  auto p = default_sweep_protocol();
  p.items_per_repetition = 6;
  p.repetitions = 1;
  p.dti = DtiConfig::from_hours(1e6, 0);
  const auto r = run_experiment(small_log(), p);
  EXPECT_EQ(r.cells[0].pooled().detected, 0u);
  EXPECT_EQ(r.cells[0].pooled().false_flags, 0u);
  for (const auto& [item, h] : small_log().histories()) {
    EXPECT_EQ(dti_partition(h, p.dti).windows.size(), 1u);
  }
}

TEST(Sweep, RowsPerAlphaAndClass) {
  const auto alphas = parse_alpha_list("0.1:1.0:0.05");
  ASSERT_EQ(alphas.size(), 19u);
  EXPECT_EQ(alphas.front(), 0.1);
  EXPECT_EQ(alphas[2], 0.2);
  EXPECT_EQ(alphas.back(), 1.0);

  auto p = default_sweep_protocol();
  p.items_per_repetition = 3;
  p.repetitions = 1;
  const auto rows = sweep_alpha(small_log(), alphas, p);
  EXPECT_EQ(rows.size(), 19u * 4u);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 19 * 4);
  EXPECT_EQ(to_json(rows, p).at("rows").size(), 76u);
}

TEST(Sweep, AlphaListParsing) {
  EXPECT_EQ(parse_alpha_list("0.2,0.389,1"), (std::vector<double>{0.2, 0.389, 1.0}));
  EXPECT_EQ(parse_alpha_list("0.5:0.5:0.1"), (std::vector<double>{0.5}));
  EXPECT_TRUE(parse_alpha_list("").empty());
  EXPECT_THROW(parse_alpha_list("0.1:1.0"), Error);
  EXPECT_THROW(parse_alpha_list("1:0:0.1"), Error);
  EXPECT_THROW(parse_alpha_list("0.1:1:0"), Error);
  EXPECT_THROW(parse_alpha_list("a,b"), Error);
  EXPECT_THROW(parse_alpha_list("-1"), Error);
}
