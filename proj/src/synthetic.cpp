#include "tdti/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

namespace tdti {

namespace {

struct ItemModel {
  double weight{1.0};
  double quality{3.5};
  Timestamp release{0};
  bool concentrated{false};
  double decay{86400.0};
};

}  // namespace

Dataset generate_synthetic_log(const SyntheticLogConfig& cfg) {
  if (cfg.users == 0 || cfg.items == 0 || cfg.span <= 0) return Dataset();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.9);

  std::vector<std::size_t> rank(cfg.items);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);

  std::vector<ItemModel> items(cfg.items);
  std::vector<double> weights(cfg.items);
  std::normal_distribution<double> quality(3.5, 0.6);
  for (std::size_t i = 0; i < cfg.items; ++i) {
    auto& m = items[i];
    m.weight = 1.0 / std::pow(static_cast<double>(rank[i] + 1), 0.95);
    m.quality = quality(rng);
    m.release = cfg.start + static_cast<Timestamp>(unit(rng) * 0.9 * static_cast<double>(cfg.span));
    m.concentrated = unit(rng) < 0.3;
    m.decay = 86400.0 * (1.0 + 9.0 * unit(rng));
    weights[i] = m.weight;
  }
  std::discrete_distribution<std::size_t> pick_item(weights.begin(), weights.end());

  // Per-user rating counts: at least 20 each, remainder shared by a lognormal activity level.
  const std::size_t floor_count = std::min<std::size_t>(20, cfg.items);
  std::vector<double> activity(cfg.users);
  std::lognormal_distribution<double> act(0.0, 0.9);
  for (auto& a : activity) a = act(rng);
  const double total_activity = std::accumulate(activity.begin(), activity.end(), 0.0);
  const std::size_t base = floor_count * cfg.users;
  const std::size_t extra = cfg.ratings > base ? cfg.ratings - base : 0;
  std::vector<std::size_t> per_user(cfg.users);
  std::size_t assigned = 0;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    per_user[u] = floor_count + static_cast<std::size_t>(std::floor(static_cast<double>(extra) * activity[u] / total_activity));
    assigned += per_user[u];
  }
  for (std::size_t u = 0; assigned < std::max(cfg.ratings, base) && u < cfg.users; ++u, ++assigned) ++per_user[u];
  const std::size_t cap = std::max<std::size_t>(1, cfg.items / 2);

  std::vector<RatingAction> actions;
  actions.reserve(cfg.ratings);
  std::exponential_distribution<double> unit_exp(1.0);
  for (std::size_t u = 0; u < cfg.users; ++u) {
    const UserId user{static_cast<std::int64_t>(u + 1)};
    const double bias = std::normal_distribution<double>(0.0, 0.4)(rng);
    const Timestamp join = cfg.start + static_cast<Timestamp>(unit(rng) * 0.8 * static_cast<double>(cfg.span));
    const Timestamp end = cfg.start + cfg.span;

    std::vector<Timestamp> sessions(1 + std::poisson_distribution<int>(4.0)(rng));
    for (auto& s : sessions) s = join + static_cast<Timestamp>(unit(rng) * static_cast<double>(end - join));
    std::uniform_int_distribution<std::size_t> pick_session(0, sessions.size() - 1);

    const std::size_t want = std::min(per_user[u], cap);
    std::unordered_set<std::size_t> rated;
    for (std::size_t attempts = 0; rated.size() < want && attempts < want * 50; ++attempts) {
      const std::size_t i = pick_item(rng);
      if (!rated.insert(i).second) continue;
      const auto& m = items[i];

      Timestamp ts = 0;
      if (m.concentrated) {
        ts = m.release + static_cast<Timestamp>(unit_exp(rng) * m.decay);
      } else {
        ts = sessions[pick_session(rng)] + static_cast<Timestamp>(unit(rng) * 3600.0);
      }
      ts = std::clamp(ts, cfg.start, end);

      const double raw = std::round(m.quality + bias + noise(rng));
      const Rating r = std::clamp(static_cast<Rating>(raw), kMinRating, kMaxRating);
      actions.push_back(RatingAction{ItemId(static_cast<std::int64_t>(i + 1)), user, r, ts});
    }
  }
  return Dataset(std::move(actions));
}

}  // namespace tdti
