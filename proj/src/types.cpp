#include "tdti/types.hpp"

#include <algorithm>
#include <numeric>

namespace tdti {

std::string_view to_string(Direction d) { return d == Direction::Push ? "push" : "nuke"; }

Direction parse_direction(std::string_view s) {
  if (s == "push") return Direction::Push;
  if (s == "nuke") return Direction::Nuke;
  throw Error("unknown attack direction '" + std::string(s) + "'");
}

RatingHistory::RatingHistory(ItemId item, std::vector<RatingAction> actions)
    : item_(item), actions_(std::move(actions)) {
  for (const auto& a : actions_) {
    if (a.item != item_) throw Error("rating history for item " + std::to_string(item_.value) +
                                     " contains an action of item " + std::to_string(a.item.value));
    if (!a.valid()) throw Error("invalid rating action on item " + std::to_string(item_.value));
  }
  std::stable_sort(actions_.begin(), actions_.end(), history_order);
}

std::int64_t RatingHistory::rating_sum() const {
  return std::accumulate(actions_.begin(), actions_.end(), std::int64_t{0},
                         [](std::int64_t s, const RatingAction& a) { return s + a.rating; });
}

double RatingHistory::mean_rating() const {
  if (actions_.empty()) return 0.0;
  return static_cast<double>(rating_sum()) / static_cast<double>(actions_.size());
}

GapSeries build_gap_series(const RatingHistory& h) {
  if (h.size() < 2) throw Error("gap series needs at least two ratings");
  GapSeries out;
  out.reserve(h.size() - 1);
  for (std::size_t j = 0; j + 1 < h.size(); ++j) {
    const Timestamp a = h[j].ts;
    const Timestamp b = h[j + 1].ts;
    // a + (b - a) / 2 floors for non-negative gaps without overflowing a + b.
    out.push_back({a + (b - a) / 2, b - a});
  }
  return out;
}

Dataset::Dataset(std::vector<RatingAction> actions) {
  std::map<ItemId, std::vector<RatingAction>> grouped;
  for (auto& a : actions) {
    users_.insert(a.user);
    grouped[a.item].push_back(a);
  }
  rating_count_ = actions.size();
  for (auto& [item, acts] : grouped) histories_.emplace(item, RatingHistory(item, std::move(acts)));
}

const RatingHistory& Dataset::history(ItemId item) const {
  auto it = histories_.find(item);
  if (it == histories_.end()) throw Error("unknown item " + std::to_string(item.value));
  return it->second;
}

std::vector<ItemId> Dataset::items() const {
  std::vector<ItemId> out;
  out.reserve(histories_.size());
  for (const auto& [item, h] : histories_) out.push_back(item);
  return out;
}

std::pair<Timestamp, Timestamp> Dataset::time_range() const {
  if (histories_.empty()) return {0, 0};
  Timestamp lo = histories_.begin()->second.first_ts();
  Timestamp hi = histories_.begin()->second.last_ts();
  for (const auto& [item, h] : histories_) {
    lo = std::min(lo, h.first_ts());
    hi = std::max(hi, h.last_ts());
  }
  return {lo, hi};
}

std::vector<RatingAction> Dataset::actions() const {
  std::vector<RatingAction> out;
  out.reserve(rating_count_);
  for (const auto& [item, h] : histories_) out.insert(out.end(), h.actions().begin(), h.actions().end());
  return out;
}

Dataset filter_sparse_items(const Dataset& d, std::size_t min_ratings) {
  if (min_ratings == 0) return d;
  std::vector<RatingAction> kept;
  for (const auto& [item, h] : d.histories()) {
    if (h.size() >= min_ratings) kept.insert(kept.end(), h.actions().begin(), h.actions().end());
  }
  return Dataset(std::move(kept));
}

ItemId most_rated_item(const Dataset& d) {
  if (d.item_count() == 0) throw Error("dataset has no items");
  const RatingHistory* best = nullptr;
  for (const auto& [item, h] : d.histories()) {
    if (best == nullptr || h.size() > best->size()) best = &h;
  }
  return best->item();
}

}  // namespace tdti
