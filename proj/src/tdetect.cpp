#include "tdti/tdetect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

namespace tdti {

WindowStats window_stats(const TimeWindow& w, const RatingHistory& h) {
  WindowStats s;
  s.count = w.end - w.start;
  s.kinds = w.rk;
  std::int64_t sum_sq = 0;
  for (std::size_t k = w.start; k < w.end; ++k) {
    s.rating_sum += h[k].rating;
    sum_sq += static_cast<std::int64_t>(h[k].rating) * h[k].rating;
  }
  const auto g = static_cast<std::int64_t>(s.count);
  s.modified_mean = static_cast<double>(s.rating_sum) / s.kinds;
  s.mean = static_cast<double>(s.rating_sum) / static_cast<double>(g);
  // g * sum(x^2) - sum(x)^2 is exact in integers and zero iff all ratings are equal.
  const std::int64_t centered = g * sum_sq - s.rating_sum * s.rating_sum;
  s.variance = static_cast<double>(centered) / (static_cast<double>(g) * static_cast<double>(g));
  return s;
}

double critical_value(int df) {
  if (df < 1 || df > static_cast<int>(kCriticalValues95.size())) {
    throw Error("no critical value for " + std::to_string(df) + " degrees of freedom");
  }
  return kCriticalValues95[static_cast<std::size_t>(df - 1)];
}

PairResult t_statistic(const WindowStats& i, const WindowStats& j, double history_mean, double mean_without_i) {
  PairResult r;
  r.df = i.kinds + j.kinds - 2;
  if (r.df == 0) return r;

  const double m = i.kinds;
  const double n = j.kinds;
  const double spread = static_cast<double>(i.count) * i.variance + static_cast<double>(j.count) * j.variance;
  const double shift = i.modified_mean - j.modified_mean - (history_mean - mean_without_i);
  r.t_value = shift / std::sqrt(spread) * std::sqrt(m * n * (m + n - 2.0) / (m + n));
  r.boundary = critical_value(r.df);
  r.flag = std::abs(r.t_value) > r.boundary ? 1 : 0;
  return r;
}

PairwiseFlagMatrix flag_matrix(const WindowPartition& p, const RatingHistory& h) {
  const std::size_t m = p.windows.size();
  if (m == 0) throw Error("partition has no windows");
  PairwiseFlagMatrix fm(m);

  std::vector<WindowStats> stats;
  stats.reserve(m);
  for (const auto& w : p.windows) stats.push_back(window_stats(w, h));

  const std::int64_t total = h.rating_sum();
  const double history_mean = static_cast<double>(total) / static_cast<double>(h.size());

  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t rest = h.size() - stats[i].count;
    const double without_i =
        rest == 0 ? history_mean : static_cast<double>(total - stats[i].rating_sum) / static_cast<double>(rest);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      fm.at(i, j) = t_statistic(stats[i], stats[j], history_mean, without_i);
      fm.z()[i] += fm.at(i, j).flag;
    }
  }
  return fm;
}

std::vector<std::size_t> detect_abnormal_windows(const WindowPartition& p, const PairwiseFlagMatrix& fm) {
  const std::size_t m = p.windows.size();
  if (fm.size() != m) throw Error("flag matrix does not match partition");
  if (m <= 1) return {};

  const auto& z = fm.z();
  bool uniform = true;
  for (std::size_t i = 1; i < m && uniform; ++i) {
    uniform = z[i] == z[0] && p.windows[i].wd == p.windows[0].wd && p.windows[i].ws == p.windows[0].ws;
  }
  if (uniform) return {};

  // Compare sums against value * m so the means never need rounding.
  std::int64_t z_sum = 0;
  std::int64_t wd_sum = 0;
  std::int64_t ws_sum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    z_sum += z[i];
    wd_sum += p.windows[i].wd;
    ws_sum += static_cast<std::int64_t>(p.windows[i].ws);
  }
  const auto mm = static_cast<std::int64_t>(m);

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& w = p.windows[i];
    if (z[i] * mm >= z_sum && w.wd * mm <= wd_sum && static_cast<std::int64_t>(w.ws) * mm >= ws_sum) out.push_back(i);
  }
  return out;
}

std::vector<RatingAction> extract_abnormal_ratings(const RatingHistory& h, const TimeWindow& w, Direction direction) {
  std::int64_t sum = 0;
  for (std::size_t k = w.start; k < w.end; ++k) sum += h[k].rating;
  const auto g = static_cast<std::int64_t>(w.end - w.start);

  std::vector<RatingAction> out;
  for (std::size_t k = w.start; k < w.end; ++k) {
    const std::int64_t scaled = static_cast<std::int64_t>(h[k].rating) * g;
    if (direction == Direction::Push ? scaled >= sum : scaled <= sum) out.push_back(h[k]);
  }
  return out;
}

std::vector<RatingAction> DetectionReport::flagged_actions() const {
  std::vector<RatingAction> out;
  for (const auto& f : flagged) out.insert(out.end(), f.actions.begin(), f.actions.end());
  return out;
}

DetectionReport detect_item(const RatingHistory& h, const DtiConfig& cfg, Direction direction) {
  DetectionReport r;
  r.item = h.item();
  r.direction = direction;
  r.config = cfg;
  r.partition = dti_partition(h, cfg);
  const auto fm = flag_matrix(r.partition, h);
  r.z = fm.z();
  r.abnormal_windows = detect_abnormal_windows(r.partition, fm);
  for (std::size_t idx : r.abnormal_windows) {
    r.flagged.push_back({idx, extract_abnormal_ratings(h, r.partition.windows[idx], direction)});
  }
  return r;
}

nlohmann::json to_json(const DetectionReport& r) {
  using nlohmann::json;
  json windows = json::array();
  for (std::size_t i = 0; i < r.partition.windows.size(); ++i) {
    const auto& w = r.partition.windows[i];
    const bool abnormal = std::find(r.abnormal_windows.begin(), r.abnormal_windows.end(), i) != r.abnormal_windows.end();
    windows.push_back({{"start_ts", w.first_ts},
                       {"end_ts", w.last_ts},
                       {"ws", w.ws},
                       {"wd", w.wd},
                       {"rk", w.rk},
                       {"z", r.z.at(i)},
                       {"abnormal", abnormal}});
  }
  json flagged = json::array();
  for (const auto& f : r.flagged) {
    for (const auto& a : f.actions) {
      flagged.push_back({{"user", a.user.value}, {"item", a.item.value}, {"rating", a.rating}, {"ts", a.ts}, {"window", f.window}});
    }
  }
  return json{{"item_id", r.item.value},
              {"direction", std::string(to_string(r.direction))},
              {"alpha_seconds", r.config.alpha},
              {"beta", r.config.beta},
              {"marks", r.partition.marks},
              {"windows", std::move(windows)},
              {"abnormal_windows", r.abnormal_windows},
              {"flagged_actions", std::move(flagged)}};
}

DetectionReport detection_report_from_json(const nlohmann::json& j) {
  try {
    DetectionReport r;
    r.item = ItemId(j.at("item_id").get<std::int64_t>());
    r.direction = parse_direction(j.at("direction").get<std::string>());
    r.config.alpha = j.at("alpha_seconds").get<Seconds>();
    r.config.beta = j.at("beta").get<std::size_t>();
    r.partition.item = r.item;
    r.partition.marks = j.at("marks").get<std::vector<Timestamp>>();
    r.abnormal_windows = j.at("abnormal_windows").get<std::vector<std::size_t>>();
    for (const auto& w : j.at("windows")) r.z.push_back(w.at("z").get<int>());
    for (const auto& a : j.at("flagged_actions")) {
      const auto window = a.at("window").get<std::size_t>();
      if (r.flagged.empty() || r.flagged.back().window != window) r.flagged.push_back({window, {}});
      r.flagged.back().actions.push_back(RatingAction{ItemId(a.at("item").get<std::int64_t>()),
                                                      UserId(a.at("user").get<std::int64_t>()),
                                                      a.at("rating").get<Rating>(), a.at("ts").get<Timestamp>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed detection report: ") + e.what());
  }
}

}  // namespace tdti
