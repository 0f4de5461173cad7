#include "tdti/dti.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <utility>

namespace tdti {

DtiConfig DtiConfig::from_hours(double alpha_hours, std::size_t beta) {
  if (!(alpha_hours >= 0.0) || !std::isfinite(alpha_hours)) throw Error("alpha must be a finite non-negative duration");
  // The epsilon keeps values such as 0.7 h from flooring to 2519 s.
  const auto secs = static_cast<Seconds>(std::floor(alpha_hours * 3600.0 + 1e-6));
  return DtiConfig{secs, beta};
}

TimeWindow make_window(const RatingHistory& h, std::size_t start, std::size_t end) {
  if (start >= end || end > h.size()) throw Error("invalid window range");
  std::bitset<kMaxRating + 1> kinds;
  for (std::size_t k = start; k < end; ++k) kinds.set(static_cast<std::size_t>(h[k].rating));
  TimeWindow w;
  w.start = start;
  w.end = end;
  w.ws = end - start;
  w.first_ts = h[start].ts;
  w.last_ts = h[end - 1].ts;
  w.wd = w.last_ts - w.first_ts;
  w.rk = static_cast<int>(kinds.count());
  return w;
}

std::vector<Timestamp> dti_marks(const GapSeries& gaps, const DtiConfig& cfg) {
  std::vector<Timestamp> marks;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, gaps.size()}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi - lo <= cfg.beta || hi == lo) continue;

    std::size_t argmax = lo;
    Seconds max_gap = gaps[lo].gap;
    Seconds min_gap = gaps[lo].gap;
    for (std::size_t k = lo + 1; k < hi; ++k) {
      if (gaps[k].gap > max_gap) {
        max_gap = gaps[k].gap;
        argmax = k;
      }
      min_gap = std::min(min_gap, gaps[k].gap);
    }
    if (max_gap - min_gap <= cfg.alpha) continue;

    marks.push_back(gaps[argmax].mid_time);
    stack.emplace_back(argmax + 1, hi);
    stack.emplace_back(lo, argmax);
  }
  std::sort(marks.begin(), marks.end());
  return marks;
}

WindowPartition dti_partition(const RatingHistory& h, const DtiConfig& cfg) {
  if (h.empty()) throw Error("cannot partition an empty history");
  WindowPartition p;
  p.item = h.item();
  if (h.size() >= 2) p.marks = dti_marks(build_gap_series(h), cfg);

  std::size_t start = 0;
  for (Timestamp mark : p.marks) {
    std::size_t end = start;
    while (end < h.size() && h[end].ts <= mark) ++end;
    p.windows.push_back(make_window(h, start, end));
    start = end;
  }
  p.windows.push_back(make_window(h, start, h.size()));
  return p;
}

}  // namespace tdti
