#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tdti/attackgen.hpp"
#include "tdti/dti.hpp"
#include "tdti/metrics.hpp"
#include "tdti/taxonomy.hpp"

namespace tdti {

inline constexpr int kEvalSchemaVersion = 1;

/// A full-factorial attack experiment. Every repetition samples
/// `items_per_repetition` targets; each target is attacked on its own and
/// only its history is run through the detector.
struct ExperimentProtocol {
  std::vector<AttackModel> models{AttackModel::Random};
  std::vector<Direction> directions{Direction::Push};
  std::vector<std::size_t> attack_sizes{10, 20, 30, 40, 50};
  std::vector<double> filler_sizes{0.0};
  std::size_t items_per_repetition{50};
  std::size_t repetitions{10};
  std::uint64_t seed{42};
  DtiConfig dti{};
  Seconds max_span{kDefaultMaxSpan};
  /// Candidate targets; empty means every item of the dataset.
  std::vector<ItemId> items;
};

struct RepetitionResult {
  MetricCounts overall;
  std::map<ItemClass, MetricCounts> by_class;
};

/// Results of one (model, direction, attack size, filler size) combination.
/// Rates are arithmetic means of the per-repetition rates, skipping
/// repetitions where a rate is undefined.
struct CellResult {
  AttackModel model{AttackModel::Random};
  Direction direction{Direction::Push};
  std::size_t attack_size{0};
  double filler_size{0.0};
  DtiConfig dti{};

  std::vector<RepetitionResult> repetitions;
  std::map<ItemId, MetricCounts> by_item;

  std::optional<double> detection_rate() const;
  std::optional<double> false_alarm_rate() const;
  std::optional<double> class_detection_rate(ItemClass c) const;
  std::optional<double> class_false_alarm_rate(ItemClass c) const;
  MetricCounts pooled() const;
};

struct EvalReport {
  ExperimentProtocol protocol;
  std::map<ItemId, ItemClass> classes;
  std::vector<CellResult> cells;
};

/// Derives an independent, reproducible seed from a base seed and a key.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> key);

/// Throws Error when the protocol names items absent from `d`.
EvalReport run_experiment(const Dataset& d, const ExperimentProtocol& protocol);

struct SweepRow {
  double alpha_hours{0.0};
  AttackModel model{AttackModel::Random};
  Direction direction{Direction::Push};
  std::size_t attack_size{0};
  double filler_size{0.0};
  std::size_t beta{0};
  ItemClass item_class{ItemClass::Fad};
  std::optional<double> detection_rate;
  std::optional<double> false_alarm_rate;
};

/// Runs the protocol once per alpha (in hours) and emits one row per alpha,
/// cell and item class.
std::vector<SweepRow> sweep_alpha(const Dataset& d, const std::vector<double>& alphas_hours,
                                  const ExperimentProtocol& protocol);

/// Protocol behind the alpha curves: 50 random push profiles, no filler, beta = 0.
ExperimentProtocol default_sweep_protocol();

/// Parses "lo:hi:step" (inclusive) or a comma-separated list of hours.
std::vector<double> parse_alpha_list(std::string_view spec);

/// CSV columns: model,direction,attack_size,filler_size,alpha_hours,beta,
/// item_class,detection_rate,false_alarm_rate. Undefined rates are empty.
void write_eval_csv(std::ostream& out, const EvalReport& r);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

nlohmann::json to_json(const ExperimentProtocol& p);
nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const std::vector<SweepRow>& rows, const ExperimentProtocol& p);

}  // namespace tdti
