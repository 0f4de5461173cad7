#pragma once

#include <optional>
#include <set>

#include "tdti/attackgen.hpp"
#include "tdti/types.hpp"

namespace tdti {

using ActionSet = std::set<RatingAction>;

/// Share of the injected target-item actions that were flagged. Filler
/// actions on other items are not counted. Empty when nothing was injected.
std::optional<double> detection_rate(const ActionSet& flagged, const InjectionRecord& truth);

/// Share of the normal actions of `evaluated` that were flagged. Actions of
/// `evaluated` that belong to `truth` are not normal. Zero when there are no
/// normal actions.
double false_alarm_rate(const ActionSet& flagged, const InjectionRecord& truth, const Dataset& evaluated);

/// Raw tallies behind both rates; additive across items and repetitions.
struct MetricCounts {
  std::size_t injected{0};
  std::size_t detected{0};
  std::size_t normal{0};
  std::size_t false_flags{0};

  std::optional<double> detection_rate() const;
  std::optional<double> false_alarm_rate() const;

  MetricCounts& operator+=(const MetricCounts& o);
  friend bool operator==(const MetricCounts&, const MetricCounts&) = default;
};

/// Tallies one evaluated history: `flagged` are actions reported abnormal,
/// `injected` the fake actions present in the history.
MetricCounts count_outcomes(const RatingHistory& evaluated, const ActionSet& flagged, const ActionSet& injected);

}  // namespace tdti
