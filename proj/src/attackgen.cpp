#include "tdti/attackgen.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include <nlohmann/json.hpp>

namespace tdti {

std::string_view to_string(AttackModel m) {
  switch (m) {
    case AttackModel::Random: return "random";
    case AttackModel::Average: return "average";
    case AttackModel::Bandwagon: return "bandwagon";
  }
  return "random";
}

AttackModel parse_attack_model(std::string_view s) {
  if (s == "random") return AttackModel::Random;
  if (s == "average") return AttackModel::Average;
  if (s == "bandwagon") return AttackModel::Bandwagon;
  throw Error("unknown attack model '" + std::string(s) + "'");
}

void AttackConfig::validate() const {
  if (!(filler_size >= 0.0 && filler_size <= 1.0)) throw Error("filler size must lie in [0, 1]");
  if (max_span <= 0) throw Error("injection span must be positive");
  if (model == AttackModel::Bandwagon && selected_items.empty()) throw Error("bandwagon attack needs selected items");
  if (model != AttackModel::Bandwagon && !selected_items.empty()) {
    throw Error("selected items are only used by the bandwagon model");
  }
  if (injection_start && *injection_start < 0) throw Error("injection start must be non-negative");
}

AttackConfig make_attack_config(const Dataset& d, AttackModel model, Direction direction, std::size_t attack_size,
                                double filler_size, ItemId target) {
  AttackConfig cfg;
  cfg.model = model;
  cfg.direction = direction;
  cfg.attack_size = attack_size;
  cfg.filler_size = filler_size;
  cfg.target = target;
  if (model == AttackModel::Bandwagon) {
    ItemId popular = most_rated_item(d);
    if (popular == target) {
      // Next most rated item; a target cannot also be its own selected item.
      const RatingHistory* best = nullptr;
      for (const auto& [item, h] : d.histories()) {
        if (item != target && (best == nullptr || h.size() > best->size())) best = &h;
      }
      if (best == nullptr) throw Error("bandwagon attack needs an item other than the target");
      popular = best->item();
    }
    cfg.selected_items = {popular};
  }
  return cfg;
}

std::vector<RatingAction> InjectionRecord::target_actions() const {
  std::vector<RatingAction> out;
  for (const auto& ia : actions) {
    if (ia.action.item == target) out.push_back(ia.action);
  }
  return out;
}

std::vector<RatingAction> InjectionRecord::all_actions() const {
  std::vector<RatingAction> out;
  out.reserve(actions.size());
  for (const auto& ia : actions) out.push_back(ia.action);
  return out;
}

namespace {

Rating rounded_mean(const RatingHistory& h) {
  // nearbyint follows the default rounding mode: nearest, ties to even.
  const double r = std::nearbyint(h.mean_rating());
  return std::clamp(static_cast<Rating>(r), kMinRating, kMaxRating);
}

}  // namespace

InjectionRecord generate_attack(const Dataset& d, const AttackConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (!d.contains(cfg.target)) throw Error("unknown target item " + std::to_string(cfg.target.value));
  for (ItemId s : cfg.selected_items) {
    if (s == cfg.target) throw Error("target item cannot also be a selected item");
  }

  InjectionRecord rec;
  rec.target = cfg.target;
  rec.direction = cfg.direction;
  rec.profile_count = cfg.attack_size;
  if (cfg.attack_size == 0) return rec;

  std::mt19937_64 rng(seed);
  const RatingHistory& target = d.history(cfg.target);

  Timestamp start = 0;
  if (cfg.injection_start) {
    start = *cfg.injection_start;
  } else {
    const Timestamp lo = target.first_ts();
    const Timestamp hi = std::max(lo, target.last_ts() - cfg.max_span);
    start = std::uniform_int_distribution<Timestamp>(lo, hi)(rng);
  }

  const std::set<ItemId> selected(cfg.selected_items.begin(), cfg.selected_items.end());
  std::vector<ItemId> pool;
  for (const auto& [item, h] : d.histories()) {
    if (item != cfg.target && selected.count(item) == 0) pool.push_back(item);
  }
  const auto filler_count = static_cast<std::size_t>(std::floor(cfg.filler_size * static_cast<double>(d.item_count()) + 1e-9));
  if (filler_count > pool.size()) {
    throw Error("filler pool has " + std::to_string(pool.size()) + " items, " + std::to_string(filler_count) +
                " requested");
  }

  const Rating target_rating = cfg.direction == Direction::Push ? kMaxRating : kMinRating;
  const UserId first_fake{d.users().empty() ? 1 : d.users().rbegin()->value + 1};
  std::uniform_int_distribution<Timestamp> when(start, start + cfg.max_span);
  std::uniform_int_distribution<Rating> random_rating(kMinRating, kMaxRating);

  std::vector<ItemId> fillers;
  for (std::size_t p = 0; p < cfg.attack_size; ++p) {
    const UserId user{first_fake.value + static_cast<std::int64_t>(p)};
    auto add = [&](ItemId item, Rating r) { rec.actions.push_back({RatingAction{item, user, r, when(rng)}, p}); };

    add(cfg.target, target_rating);
    for (ItemId s : cfg.selected_items) add(s, kMaxRating);

    fillers.clear();
    std::sample(pool.begin(), pool.end(), std::back_inserter(fillers), filler_count, rng);
    for (ItemId f : fillers) {
      const Rating r = cfg.model == AttackModel::Average ? rounded_mean(d.history(f)) : random_rating(rng);
      add(f, r);
    }
  }

  std::sort(rec.actions.begin(), rec.actions.end(), [](const InjectedAction& a, const InjectedAction& b) {
    return std::tie(a.action.ts, a.action.user, a.action.item) < std::tie(b.action.ts, b.action.user, b.action.item);
  });
  return rec;
}

Dataset inject(const Dataset& d, const InjectionRecord& rec) {
  if (rec.empty()) return d;
  std::vector<RatingAction> merged = d.actions();
  for (const auto& ia : rec.actions) {
    if (d.users().count(ia.action.user) != 0) {
      throw Error("injected user id " + std::to_string(ia.action.user.value) + " collides with a real user");
    }
    merged.push_back(ia.action);
  }
  return Dataset(std::move(merged));
}

RatingHistory inject_into_history(const RatingHistory& h, const InjectionRecord& rec) {
  std::vector<RatingAction> merged = h.actions();
  for (const auto& ia : rec.actions) {
    if (ia.action.item == h.item()) merged.push_back(ia.action);
  }
  return RatingHistory(h.item(), std::move(merged));
}

void write_injection_record(std::ostream& out, const InjectionRecord& rec) {
  for (const auto& ia : rec.actions) {
    const auto& a = ia.action;
    out << R"({"user":)" << a.user.value << R"(,"item":)" << a.item.value << R"(,"rating":)" << a.rating
        << R"(,"ts":)" << a.ts << R"(,"label":)" << ia.profile << R"(,"target":)" << rec.target.value
        << R"(,"direction":")" << to_string(rec.direction) << "\"}\n";
  }
}

InjectionRecord read_injection_record(std::istream& in) {
  InjectionRecord rec;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error("injection record line " + std::to_string(lineno) + ": not JSON");
    try {
      InjectedAction ia{RatingAction{ItemId(j.at("item").get<std::int64_t>()), UserId(j.at("user").get<std::int64_t>()),
                                     j.at("rating").get<Rating>(), j.at("ts").get<Timestamp>()},
                        j.at("label").get<std::size_t>()};
      const ItemId target(j.at("target").get<std::int64_t>());
      const Direction dir = parse_direction(j.at("direction").get<std::string>());
      if (first) {
        rec.target = target;
        rec.direction = dir;
        first = false;
      } else if (target != rec.target || dir != rec.direction) {
        throw Error("injection record mixes targets or directions");
      }
      rec.profile_count = std::max(rec.profile_count, ia.profile + 1);
      rec.actions.push_back(ia);
    } catch (const nlohmann::json::exception& e) {
      throw Error("injection record line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rec;
}

}  // namespace tdti
