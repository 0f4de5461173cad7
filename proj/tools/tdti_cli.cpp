// tdti: command-line front end for ingestion, attack injection, detection
// and evaluation runs. Subcommands exchange data through files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tdti/attackgen.hpp"
#include "tdti/experiment.hpp"
#include "tdti/metrics.hpp"
#include "tdti/rating_log.hpp"
#include "tdti/tdetect.hpp"

namespace {

using namespace tdti;

struct GlobalOptions {
  std::uint64_t seed{42};
  double alpha_hours{kDefaultAlphaHours};
  std::size_t beta{kDefaultBeta};
  std::string format{"csv"};
};

Dataset load(const std::string& path, const std::string& format) {
  const LogFormat f = format.empty() ? guess_log_format(path) : parse_log_format(format);
  return read_rating_log(path, f);
}

/// Writes to `path`, or to stdout when `path` is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<Direction> directions_from(const std::string& s) {
  if (s == "both") return {Direction::Push, Direction::Nuke};
  return {parse_direction(s)};
}

template <typename T, typename Parse>
std::vector<T> parse_each(const std::vector<std::string>& in, Parse parse) {
  std::vector<T> out;
  for (const auto& s : in) out.push_back(parse(s));
  return out;
}

std::string json_line(const nlohmann::json& j) { return j.dump() + "\n"; }

std::string optional_number(const std::optional<double>& v) {
  if (!v) return "absent";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shilling-attack burst detection on item rating histories"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--alpha-hours", g.alpha_hours, "DTI gap-spread threshold in hours")->capture_default_str();
  auto* beta_opt = app.add_option("--beta", g.beta, "DTI minimum sub-series length")->capture_default_str();
  app.add_option("--format", g.format, "Report format on stdout")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a rating log, drop sparse items, write a normalized cache");
  std::string ingest_in, ingest_in_format, ingest_out, ingest_out_format{"tsv"};
  std::size_t min_ratings = 10;
  ingest->add_option("--input", ingest_in, "Rating log (u.data TSV or JSON lines)")->required();
  ingest->add_option("--input-format", ingest_in_format, "tsv or jsonl (default: by extension)");
  ingest->add_option("--min-ratings", min_ratings, "Drop items with fewer ratings")->capture_default_str();
  ingest->add_option("--output", ingest_out, "Normalized dataset cache");
  ingest->add_option("--output-format", ingest_out_format, "tsv or jsonl")->capture_default_str();

  // inject
  auto* inject_cmd = app.add_subcommand("inject", "Generate attack profiles and merge them into a dataset");
  std::string inj_data, inj_model{"random"}, inj_dir{"push"}, inj_out, inj_labels;
  std::size_t inj_size = 50;
  double inj_filler = 0.0;
  std::int64_t inj_target = 0;
  Seconds inj_span = kDefaultMaxSpan;
  std::optional<Timestamp> inj_start;
  inject_cmd->add_option("--dataset", inj_data, "Dataset cache")->required();
  inject_cmd->add_option("--model", inj_model)->check(CLI::IsMember({"random", "average", "bandwagon"}))->capture_default_str();
  inject_cmd->add_option("--direction", inj_dir)->check(CLI::IsMember({"push", "nuke"}))->capture_default_str();
  inject_cmd->add_option("--attack-size", inj_size)->capture_default_str();
  inject_cmd->add_option("--filler-size", inj_filler, "Fraction of items rated as filler")->capture_default_str();
  inject_cmd->add_option("--target", inj_target, "Target item id")->required();
  inject_cmd->add_option("--span-seconds", inj_span)->capture_default_str();
  inject_cmd->add_option("--start", inj_start, "Injection start timestamp (default: random within the target's history)");
  inject_cmd->add_option("--output", inj_out, "Merged dataset")->required();
  inject_cmd->add_option("--labels", inj_labels, "Ground-truth labels (JSON lines)")->required();

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Run the detector on every item, one JSON report per line");
  std::string det_data, det_dir{"push"}, det_out;
  std::vector<std::int64_t> det_items;
  detect_cmd->add_option("--dataset", det_data, "Dataset cache")->required();
  detect_cmd->add_option("--direction", det_dir)->check(CLI::IsMember({"push", "nuke", "both"}))->capture_default_str();
  detect_cmd->add_option("--items", det_items, "Only analyse these item ids")->delimiter(',');
  detect_cmd->add_option("--output", det_out, "Report file (default stdout)");

  // evaluate
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Score detection reports against labels, or run a full attack experiment");
  std::string ev_data, ev_reports, ev_labels, ev_csv, ev_json;
  std::vector<std::string> ev_models{"random"}, ev_dirs{"push"};
  std::vector<std::size_t> ev_sizes{10, 20, 30, 40, 50};
  std::vector<double> ev_fillers{0.0};
  std::size_t ev_items = 50, ev_reps = 10;
  eval_cmd->add_option("--dataset", ev_data, "Dataset cache")->required();
  eval_cmd->add_option("--reports", ev_reports, "Detection reports to score (scoring mode)");
  eval_cmd->add_option("--labels", ev_labels, "Ground-truth labels for --reports");
  eval_cmd->add_option("--models", ev_models)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--directions", ev_dirs)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--attack-sizes", ev_sizes)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--filler-sizes", ev_fillers)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--items-per-rep", ev_items)->capture_default_str();
  eval_cmd->add_option("--repetitions", ev_reps)->capture_default_str();
  eval_cmd->add_option("--csv", ev_csv, "Per-cell CSV output");
  eval_cmd->add_option("--json", ev_json, "JSON summary output");

  // sweep-alpha
  auto* sweep_cmd = app.add_subcommand("sweep-alpha", "Detection and false alarm per alpha and item class");
  std::string sw_data, sw_alphas{"0.1:1.0:0.05"}, sw_model{"random"}, sw_dir{"push"}, sw_csv, sw_json;
  std::size_t sw_size = 50, sw_items = 50, sw_reps = 10;
  double sw_filler = 0.0;
  sweep_cmd->add_option("--dataset", sw_data, "Dataset cache")->required();
  sweep_cmd->add_option("--alphas", sw_alphas, "lo:hi:step or comma list, in hours")->capture_default_str();
  sweep_cmd->add_option("--model", sw_model)->check(CLI::IsMember({"random", "average", "bandwagon"}))->capture_default_str();
  sweep_cmd->add_option("--direction", sw_dir)->check(CLI::IsMember({"push", "nuke"}))->capture_default_str();
  sweep_cmd->add_option("--attack-size", sw_size)->capture_default_str();
  sweep_cmd->add_option("--filler-size", sw_filler)->capture_default_str();
  sweep_cmd->add_option("--items-per-rep", sw_items)->capture_default_str();
  sweep_cmd->add_option("--repetitions", sw_reps)->capture_default_str();
  sweep_cmd->add_option("--csv", sw_csv, "CSV output");
  sweep_cmd->add_option("--json", sw_json, "JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      Dataset d = load(ingest_in, ingest_in_format);
      d = filter_sparse_items(d, min_ratings);
      if (!ingest_out.empty()) write_rating_log(ingest_out, d, parse_log_format(ingest_out_format));
      std::cout << d.item_count() << " items, " << d.user_count() << " users, " << d.rating_count() << " ratings\n";
      return 0;
    }

    if (*inject_cmd) {
      const Dataset d = load(inj_data, "");
      AttackConfig cfg = make_attack_config(d, parse_attack_model(inj_model), parse_direction(inj_dir), inj_size,
                                            inj_filler, ItemId(inj_target));
      cfg.max_span = inj_span;
      cfg.injection_start = inj_start;
      const auto rec = generate_attack(d, cfg, g.seed);
      write_rating_log(inj_out, inject(d, rec), guess_log_format(inj_out));
      std::ostringstream labels;
      write_injection_record(labels, rec);
      emit(inj_labels, labels.str());
      std::cerr << rec.actions.size() << " injected actions from " << rec.profile_count << " profiles\n";
      return 0;
    }

    const DtiConfig dti = DtiConfig::from_hours(g.alpha_hours, g.beta);

    if (*detect_cmd) {
      const Dataset d = load(det_data, "");
      std::vector<ItemId> items;
      if (det_items.empty()) {
        items = d.items();
      } else {
        for (auto id : det_items) items.emplace_back(id);
        std::sort(items.begin(), items.end());
      }
      std::ostringstream out;
      for (ItemId item : items) {
        for (Direction dir : directions_from(det_dir)) {
          out << json_line(to_json(detect_item(d.history(item), dti, dir)));
        }
      }
      emit(det_out, out.str());
      return 0;
    }

    if (*eval_cmd) {
      const Dataset d = load(ev_data, "");
      if (!ev_reports.empty()) {
        if (ev_labels.empty()) throw Error("evaluate --reports needs truth labels (--labels)");
        std::ifstream lin(ev_labels);
        if (!lin) throw Error("cannot open " + ev_labels);
        const InjectionRecord truth = read_injection_record(lin);

        std::ifstream rin(ev_reports);
        if (!rin) throw Error("cannot open " + ev_reports);
        ActionSet flagged;
        std::vector<RatingAction> evaluated;
        std::set<ItemId> seen;
        std::string line;
        while (std::getline(rin, line)) {
          if (line.empty()) continue;
          const auto report = detection_report_from_json(nlohmann::json::parse(line));
          for (const auto& a : report.flagged_actions()) flagged.insert(a);
          if (seen.insert(report.item).second && d.contains(report.item)) {
            const auto& h = d.history(report.item).actions();
            evaluated.insert(evaluated.end(), h.begin(), h.end());
          }
        }
        const Dataset evaluated_items(std::move(evaluated));
        const auto det = detection_rate(flagged, truth);
        const double fa = false_alarm_rate(flagged, truth, evaluated_items);
        if (g.format == "json") {
          nlohmann::json j{{"detection_rate", det ? nlohmann::json(*det) : nlohmann::json(nullptr)},
                           {"false_alarm_rate", fa},
                           {"evaluated_items", evaluated_items.item_count()},
                           {"injected_target_actions", truth.target_actions().size()}};
          emit(ev_csv.empty() ? ev_json : ev_csv, json_line(j));
        } else {
          emit(ev_csv, "detection_rate,false_alarm_rate\n" + (det ? optional_number(det) : std::string()) + "," +
                           optional_number(fa) + "\n");
        }
        return 0;
      }

      ExperimentProtocol p;
      p.models = parse_each<AttackModel>(ev_models, [](const std::string& s) { return parse_attack_model(s); });
      p.directions.clear();
      for (const auto& s : ev_dirs) {
        for (Direction dir : directions_from(s)) p.directions.push_back(dir);
      }
      p.attack_sizes = ev_sizes;
      p.filler_sizes = ev_fillers;
      p.items_per_repetition = ev_items;
      p.repetitions = ev_reps;
      p.seed = g.seed;
      p.dti = dti;
      const auto report = run_experiment(d, p);

      std::ostringstream csv;
      write_eval_csv(csv, report);
      const std::string json = to_json(report).dump(2) + "\n";
      if (!ev_csv.empty()) emit(ev_csv, csv.str());
      if (!ev_json.empty()) emit(ev_json, json);
      if (ev_csv.empty() && ev_json.empty()) emit("", g.format == "json" ? json : csv.str());
      return 0;
    }

    if (*sweep_cmd) {
      const Dataset d = load(sw_data, "");
      ExperimentProtocol p = default_sweep_protocol();
      p.models = {parse_attack_model(sw_model)};
      p.directions = {parse_direction(sw_dir)};
      p.attack_sizes = {sw_size};
      p.filler_sizes = {sw_filler};
      p.items_per_repetition = sw_items;
      p.repetitions = sw_reps;
      p.seed = g.seed;
      // The alpha curves are traced without the beta cutoff unless one is given.
      p.dti.beta = beta_opt->count() > 0 ? g.beta : 0;
      const auto rows = sweep_alpha(d, parse_alpha_list(sw_alphas), p);

      std::ostringstream csv;
      write_sweep_csv(csv, rows);
      const std::string json = to_json(rows, p).dump(2) + "\n";
      if (!sw_csv.empty()) emit(sw_csv, csv.str());
      if (!sw_json.empty()) emit(sw_json, json);
      if (sw_csv.empty() && sw_json.empty()) emit("", g.format == "json" ? json : csv.str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "tdti: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
