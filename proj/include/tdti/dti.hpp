#pragma once

#include <vector>

#include "tdti/types.hpp"

namespace tdti {

/// Thresholds for dynamic time-interval partitioning.
///
/// A gap sub-series is split at its largest gap only while it is longer than
/// `beta` entries and its gap spread (max - min) exceeds `alpha` seconds.
struct DtiConfig {
  Seconds alpha{1400};
  std::size_t beta{10};

  /// `alpha_hours` is floored to whole seconds. Throws on negative input.
  static DtiConfig from_hours(double alpha_hours, std::size_t beta);
  double alpha_hours() const { return static_cast<double>(alpha) / 3600.0; }
};

inline constexpr double kDefaultAlphaHours = 0.389;
inline constexpr std::size_t kDefaultBeta = 10;

/// A contiguous run of actions [start, end) of one history.
struct TimeWindow {
  std::size_t start{0};
  std::size_t end{0};
  std::size_t ws{0};  ///< rating count
  Seconds wd{0};      ///< last timestamp - first timestamp
  int rk{0};          ///< distinct rating values present

  Timestamp first_ts{0};
  Timestamp last_ts{0};

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Summarises actions [start, end) of `h`. Requires start < end <= h.size().
TimeWindow make_window(const RatingHistory& h, std::size_t start, std::size_t end);

struct WindowPartition {
  ItemId item;
  std::vector<TimeWindow> windows;
  /// Cut positions, ascending. Window x holds actions with ts <= marks[x],
  /// window x+1 actions with ts > marks[x].
  std::vector<Timestamp> marks;
};

/// Mark points of a gap series, ascending. Splitting is done with an explicit
/// stack; the maximal gap of a sub-series (leftmost on ties) is consumed by
/// the split and belongs to neither side.
std::vector<Timestamp> dti_marks(const GapSeries& gaps, const DtiConfig& cfg);

/// Partitions a non-empty history into windows cut at the DTI mark points.
WindowPartition dti_partition(const RatingHistory& h, const DtiConfig& cfg);

}  // namespace tdti
