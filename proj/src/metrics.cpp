#include "tdti/metrics.hpp"

namespace tdti {

std::optional<double> detection_rate(const ActionSet& flagged, const InjectionRecord& truth) {
  const auto injected = truth.target_actions();
  if (injected.empty()) return std::nullopt;
  std::size_t hit = 0;
  for (const auto& a : injected) hit += flagged.count(a);
  return static_cast<double>(hit) / static_cast<double>(injected.size());
}

double false_alarm_rate(const ActionSet& flagged, const InjectionRecord& truth, const Dataset& evaluated) {
  const auto fake = truth.all_actions();
  const ActionSet injected(fake.begin(), fake.end());
  std::size_t normal = 0;
  std::size_t wrong = 0;
  for (const auto& [item, h] : evaluated.histories()) {
    for (const auto& a : h.actions()) {
      if (injected.count(a) != 0) continue;
      ++normal;
      wrong += flagged.count(a);
    }
  }
  return normal == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(normal);
}

std::optional<double> MetricCounts::detection_rate() const {
  if (injected == 0) return std::nullopt;
  return static_cast<double>(detected) / static_cast<double>(injected);
}

std::optional<double> MetricCounts::false_alarm_rate() const {
  if (normal == 0) return std::nullopt;
  return static_cast<double>(false_flags) / static_cast<double>(normal);
}

MetricCounts& MetricCounts::operator+=(const MetricCounts& o) {
  injected += o.injected;
  detected += o.detected;
  normal += o.normal;
  false_flags += o.false_flags;
  return *this;
}

MetricCounts count_outcomes(const RatingHistory& evaluated, const ActionSet& flagged, const ActionSet& injected) {
  MetricCounts c;
  for (const auto& a : evaluated.actions()) {
    const bool fake = injected.count(a) != 0;
    const bool hit = flagged.count(a) != 0;
    if (fake) {
      ++c.injected;
      c.detected += hit;
    } else {
      ++c.normal;
      c.false_flags += hit;
    }
  }
  return c;
}

}  // namespace tdti
