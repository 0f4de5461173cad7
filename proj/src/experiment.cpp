#include "tdti/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "tdti/tdetect.hpp"

namespace tdti {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& x : v) {
    if (x) {
      sum += *x;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string config_number(double v) { return fmt("%.10g", v); }
std::string rate(const std::optional<double>& v) { return v ? fmt("%.6f", *v) : std::string(); }

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json counts_json(const MetricCounts& c) {
  return {{"injected", c.injected},
          {"detected", c.detected},
          {"normal", c.normal},
          {"false_flags", c.false_flags},
          {"detection_rate", optional_json(c.detection_rate())},
          {"false_alarm_rate", optional_json(c.false_alarm_rate())}};
}

constexpr const char* kCsvHeader =
    "model,direction,attack_size,filler_size,alpha_hours,beta,item_class,detection_rate,false_alarm_rate\n";

void csv_row(std::ostream& out, AttackModel model, Direction dir, std::size_t attack_size, double filler,
             double alpha_hours, std::size_t beta, std::string_view item_class, const std::optional<double>& det,
             const std::optional<double>& fa) {
  out << to_string(model) << ',' << to_string(dir) << ',' << attack_size << ',' << config_number(filler) << ','
      << config_number(alpha_hours) << ',' << beta << ',' << item_class << ',' << rate(det) << ',' << rate(fa)
      << '\n';
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t k : key) h = splitmix64(h ^ splitmix64(k));
  return h;
}

std::optional<double> CellResult::detection_rate() const {
  std::vector<std::optional<double>> v;
  for (const auto& r : repetitions) v.push_back(r.overall.detection_rate());
  return mean_of(v);
}

std::optional<double> CellResult::false_alarm_rate() const {
  std::vector<std::optional<double>> v;
  for (const auto& r : repetitions) v.push_back(r.overall.false_alarm_rate());
  return mean_of(v);
}

std::optional<double> CellResult::class_detection_rate(ItemClass c) const {
  std::vector<std::optional<double>> v;
  for (const auto& r : repetitions) {
    auto it = r.by_class.find(c);
    if (it != r.by_class.end()) v.push_back(it->second.detection_rate());
  }
  return mean_of(v);
}

std::optional<double> CellResult::class_false_alarm_rate(ItemClass c) const {
  std::vector<std::optional<double>> v;
  for (const auto& r : repetitions) {
    auto it = r.by_class.find(c);
    if (it != r.by_class.end()) v.push_back(it->second.false_alarm_rate());
  }
  return mean_of(v);
}

MetricCounts CellResult::pooled() const {
  MetricCounts c;
  for (const auto& r : repetitions) c += r.overall;
  return c;
}

EvalReport run_experiment(const Dataset& d, const ExperimentProtocol& protocol) {
  EvalReport report;
  report.protocol = protocol;

  std::vector<ItemId> pool = protocol.items;
  for (ItemId item : pool) {
    if (!d.contains(item)) throw Error("protocol references absent item " + std::to_string(item.value));
  }
  if (pool.empty()) pool = d.items();
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  report.classes = classify_items(d);
  if (protocol.repetitions == 0 || pool.empty()) return report;

  // Targets are shared by every cell of a repetition, and a target's attack
  // seed depends only on (repetition, item), so cells differ only in the
  // attack parameters.
  std::vector<std::vector<ItemId>> targets(protocol.repetitions);
  for (std::size_t rep = 0; rep < protocol.repetitions; ++rep) {
    std::mt19937_64 rng(derive_seed(protocol.seed, {rep}));
    std::sample(pool.begin(), pool.end(), std::back_inserter(targets[rep]),
                std::min(protocol.items_per_repetition, pool.size()), rng);
  }

  for (AttackModel model : protocol.models) {
    for (Direction dir : protocol.directions) {
      for (std::size_t size : protocol.attack_sizes) {
        for (double filler : protocol.filler_sizes) {
          CellResult cell;
          cell.model = model;
          cell.direction = dir;
          cell.attack_size = size;
          cell.filler_size = filler;
          cell.dti = protocol.dti;

          for (std::size_t rep = 0; rep < protocol.repetitions; ++rep) {
            RepetitionResult rr;
            for (ItemId target : targets[rep]) {
              AttackConfig cfg = make_attack_config(d, model, dir, size, filler, target);
              cfg.max_span = protocol.max_span;
              const auto rec = generate_attack(d, cfg, derive_seed(protocol.seed, {rep, static_cast<std::uint64_t>(target.value)}));
              const RatingHistory attacked = inject_into_history(d.history(target), rec);

              const auto detection = detect_item(attacked, protocol.dti, dir);
              const auto flagged_list = detection.flagged_actions();
              const ActionSet flagged(flagged_list.begin(), flagged_list.end());
              const auto fake = rec.target_actions();
              const ActionSet injected(fake.begin(), fake.end());

              const MetricCounts c = count_outcomes(attacked, flagged, injected);
              rr.overall += c;
              rr.by_class[report.classes.at(target)] += c;
              cell.by_item[target] += c;
            }
            cell.repetitions.push_back(std::move(rr));
          }
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  return report;
}

ExperimentProtocol default_sweep_protocol() {
  ExperimentProtocol p;
  p.attack_sizes = {50};
  p.filler_sizes = {0.0};
  p.dti.beta = 0;
  return p;
}

std::vector<SweepRow> sweep_alpha(const Dataset& d, const std::vector<double>& alphas_hours,
                                  const ExperimentProtocol& protocol) {
  std::vector<SweepRow> rows;
  for (double alpha : alphas_hours) {
    ExperimentProtocol p = protocol;
    p.dti = DtiConfig::from_hours(alpha, protocol.dti.beta);
    const auto report = run_experiment(d, p);
    for (const auto& cell : report.cells) {
      for (ItemClass c : kItemClasses) {
        SweepRow row;
        row.alpha_hours = alpha;
        row.model = cell.model;
        row.direction = cell.direction;
        row.attack_size = cell.attack_size;
        row.filler_size = cell.filler_size;
        row.beta = cell.dti.beta;
        row.item_class = c;
        row.detection_rate = cell.class_detection_rate(c);
        row.false_alarm_rate = cell.class_false_alarm_rate(c);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<double> parse_alpha_list(std::string_view spec) {
  auto number = [](std::string_view s) {
    std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != str.size() || !std::isfinite(v) || v < 0.0) {
      throw Error("invalid alpha value '" + str + "'");
    }
    return v;
  };

  std::vector<double> out;
  if (spec.empty()) return out;
  if (spec.find(':') != std::string_view::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw Error("alpha range must be lo:hi:step");
    const double lo = number(spec.substr(0, c1));
    const double hi = number(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = number(spec.substr(c2 + 1));
    if (step <= 0.0 || hi < lo) throw Error("alpha range needs lo <= hi and a positive step");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < n; ++k) {
      // Rounded to 12 significant digits so 0.1 + 2 * 0.05 prints as 0.2.
      out.push_back(std::stod(fmt("%.12g", lo + static_cast<double>(k) * step)));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    out.push_back(number(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

void write_eval_csv(std::ostream& out, const EvalReport& r) {
  out << kCsvHeader;
  for (const auto& cell : r.cells) {
    const double alpha_h = cell.dti.alpha_hours();
    csv_row(out, cell.model, cell.direction, cell.attack_size, cell.filler_size, alpha_h, cell.dti.beta, "all",
            cell.detection_rate(), cell.false_alarm_rate());
    for (ItemClass c : kItemClasses) {
      csv_row(out, cell.model, cell.direction, cell.attack_size, cell.filler_size, alpha_h, cell.dti.beta,
              to_string(c), cell.class_detection_rate(c), cell.class_false_alarm_rate(c));
    }
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader;
  for (const auto& row : rows) {
    csv_row(out, row.model, row.direction, row.attack_size, row.filler_size, row.alpha_hours, row.beta,
            to_string(row.item_class), row.detection_rate, row.false_alarm_rate);
  }
}

nlohmann::json to_json(const ExperimentProtocol& p) {
  using nlohmann::json;
  json models = json::array();
  for (auto m : p.models) models.push_back(std::string(to_string(m)));
  json dirs = json::array();
  for (auto d : p.directions) dirs.push_back(std::string(to_string(d)));
  json items = json::array();
  for (auto i : p.items) items.push_back(i.value);
  return {{"models", models},
          {"directions", dirs},
          {"attack_sizes", p.attack_sizes},
          {"filler_sizes", p.filler_sizes},
          {"items_per_repetition", p.items_per_repetition},
          {"repetitions", p.repetitions},
          {"seed", p.seed},
          {"alpha_seconds", p.dti.alpha},
          {"alpha_hours", p.dti.alpha_hours()},
          {"beta", p.dti.beta},
          {"max_span_seconds", p.max_span},
          {"items", items}};
}

nlohmann::json to_json(const EvalReport& r) {
  using nlohmann::json;
  json cells = json::array();
  for (const auto& cell : r.cells) {
    json reps = json::array();
    for (const auto& rep : cell.repetitions) {
      reps.push_back({{"detection_rate", optional_json(rep.overall.detection_rate())},
                      {"false_alarm_rate", optional_json(rep.overall.false_alarm_rate())}});
    }
    json classes = json::object();
    for (ItemClass c : kItemClasses) {
      MetricCounts pooled;
      for (const auto& rep : cell.repetitions) {
        auto it = rep.by_class.find(c);
        if (it != rep.by_class.end()) pooled += it->second;
      }
      json entry = counts_json(pooled);
      entry["detection_rate"] = optional_json(cell.class_detection_rate(c));
      entry["false_alarm_rate"] = optional_json(cell.class_false_alarm_rate(c));
      classes[std::string(to_string(c))] = entry;
    }
    json items = json::array();
    for (const auto& [item, counts] : cell.by_item) {
      json entry = counts_json(counts);
      entry["item"] = item.value;
      entry["class"] = std::string(to_string(r.classes.at(item)));
      items.push_back(entry);
    }
    json totals = counts_json(cell.pooled());
    cells.push_back({{"model", std::string(to_string(cell.model))},
                     {"direction", std::string(to_string(cell.direction))},
                     {"attack_size", cell.attack_size},
                     {"filler_size", cell.filler_size},
                     {"alpha_hours", cell.dti.alpha_hours()},
                     {"alpha_seconds", cell.dti.alpha},
                     {"beta", cell.dti.beta},
                     {"detection_rate", optional_json(cell.detection_rate())},
                     {"false_alarm_rate", optional_json(cell.false_alarm_rate())},
                     {"totals", totals},
                     {"repetitions", reps},
                     {"classes", classes},
                     {"items", items}});
  }
  json class_counts = json::object();
  for (ItemClass c : kItemClasses) class_counts[std::string(to_string(c))] = 0;
  for (const auto& [item, c] : r.classes) class_counts[std::string(to_string(c))] = class_counts[std::string(to_string(c))].get<int>() + 1;
  return {{"schema", "tdti.eval"},
          {"schema_version", kEvalSchemaVersion},
          {"protocol", to_json(r.protocol)},
          {"class_counts", class_counts},
          {"cells", cells}};
}

nlohmann::json to_json(const std::vector<SweepRow>& rows, const ExperimentProtocol& p) {
  using nlohmann::json;
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back({{"alpha_hours", row.alpha_hours},
                   {"model", std::string(to_string(row.model))},
                   {"direction", std::string(to_string(row.direction))},
                   {"attack_size", row.attack_size},
                   {"filler_size", row.filler_size},
                   {"beta", row.beta},
                   {"item_class", std::string(to_string(row.item_class))},
                   {"detection_rate", optional_json(row.detection_rate)},
                   {"false_alarm_rate", optional_json(row.false_alarm_rate)}});
  }
  return {{"schema", "tdti.sweep"}, {"schema_version", kEvalSchemaVersion}, {"protocol", to_json(p)}, {"rows", out}};
}

}  // namespace tdti
