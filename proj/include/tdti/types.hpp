#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tdti {

/// Integer identifier tagged by what it identifies, so item and user ids
/// cannot be swapped by accident.
template <typename Tag>
struct Id {
  std::int64_t value{0};

  constexpr Id() = default;
  constexpr explicit Id(std::int64_t v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
  friend std::ostream& operator<<(std::ostream& os, Id id) { return os << id.value; }
};

using ItemId = Id<struct ItemTag>;
using UserId = Id<struct UserTag>;

/// Seconds since the epoch.
using Timestamp = std::int64_t;
/// A duration in seconds.
using Seconds = std::int64_t;
using Rating = int;

inline constexpr Rating kMinRating = 1;
inline constexpr Rating kMaxRating = 5;

/// Base for every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { Push, Nuke };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// One rating event: user `user` gave item `item` the rating `rating` at `ts`.
struct RatingAction {
  ItemId item;
  UserId user;
  Rating rating{kMinRating};
  Timestamp ts{0};

  bool valid() const { return rating >= kMinRating && rating <= kMaxRating && ts >= 0; }

  friend auto operator<=>(const RatingAction&, const RatingAction&) = default;
};

/// Ordering used inside a history: by time, then by user for ties.
inline bool history_order(const RatingAction& a, const RatingAction& b) {
  if (a.ts != b.ts) return a.ts < b.ts;
  return a.user < b.user;
}

/// The time-ordered ratings of a single item.
class RatingHistory {
 public:
  RatingHistory() = default;
  /// Stable-sorts `actions` by (timestamp, user). Throws if any action
  /// belongs to a different item or violates the rating/timestamp range.
  RatingHistory(ItemId item, std::vector<RatingAction> actions);

  ItemId item() const { return item_; }
  const std::vector<RatingAction>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  const RatingAction& operator[](std::size_t i) const { return actions_[i]; }

  Timestamp first_ts() const { return actions_.front().ts; }
  Timestamp last_ts() const { return actions_.back().ts; }

  std::int64_t rating_sum() const;
  double mean_rating() const;

  friend bool operator==(const RatingHistory&, const RatingHistory&) = default;

 private:
  ItemId item_;
  std::vector<RatingAction> actions_;
};

struct GapEntry {
  Timestamp mid_time{0};
  Seconds gap{0};

  friend bool operator==(const GapEntry&, const GapEntry&) = default;
};

/// Gaps between consecutive ratings of one history, each paired with the
/// midpoint of the two timestamps it separates.
using GapSeries = std::vector<GapEntry>;

/// Throws Error when the history has fewer than two actions.
GapSeries build_gap_series(const RatingHistory& h);

/// A rating log grouped into per-item histories.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<RatingAction> actions);

  const std::map<ItemId, RatingHistory>& histories() const { return histories_; }
  const std::set<UserId>& users() const { return users_; }

  bool contains(ItemId item) const { return histories_.count(item) != 0; }
  /// Throws Error for an unknown item.
  const RatingHistory& history(ItemId item) const;

  std::vector<ItemId> items() const;
  std::size_t item_count() const { return histories_.size(); }
  std::size_t user_count() const { return users_.size(); }
  std::size_t rating_count() const { return rating_count_; }
  std::pair<Timestamp, Timestamp> time_range() const;

  /// All actions, item by item in id order, each history in time order.
  std::vector<RatingAction> actions() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::map<ItemId, RatingHistory> histories_;
  std::set<UserId> users_;
  std::size_t rating_count_{0};
};

/// Keeps items with at least `min_ratings` ratings.
Dataset filter_sparse_items(const Dataset& d, std::size_t min_ratings);

/// Item with the most ratings; the lowest id wins ties. Throws on an empty dataset.
ItemId most_rated_item(const Dataset& d);

}  // namespace tdti

template <typename Tag>
struct std::hash<tdti::Id<Tag>> {
  std::size_t operator()(tdti::Id<Tag> id) const noexcept { return std::hash<std::int64_t>{}(id.value); }
};
