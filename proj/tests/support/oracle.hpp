#pragma once

// Test-only reference implementations. Everything here works from raw
// rating lists in exact rational arithmetic and shares no code with the
// library's statistics path.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tdti/types.hpp"

namespace tdti::support {

using Rational = boost::multiprecision::cpp_rational;

struct ExactStats {
  Rational count;
  Rational kinds;
  Rational modified_mean;
  Rational mean;
  Rational variance;
};

inline ExactStats exact_stats(const std::vector<int>& ratings) {
  ExactStats s;
  Rational sum = 0;
  std::set<int> kinds;
  for (int r : ratings) {
    sum += r;
    kinds.insert(r);
  }
  s.count = static_cast<int>(ratings.size());
  s.kinds = static_cast<int>(kinds.size());
  s.modified_mean = sum / s.kinds;
  s.mean = sum / s.count;
  Rational acc = 0;
  for (int r : ratings) acc += (Rational(r) - s.mean) * (Rational(r) - s.mean);
  s.variance = acc / s.count;
  return s;
}

inline Rational exact_mean(const std::vector<int>& ratings) {
  Rational sum = 0;
  for (int r : ratings) sum += r;
  return sum / static_cast<int>(ratings.size());
}

struct ExactT {
  long double t{0.0L};
  int df{0};
};

/// Evaluates the modified T statistic directly from its definition:
///   T = (mm_i - mm_j - (a0 - ai)) / sqrt(g s_i^2 + h s_j^2) * sqrt(m n (m+n-2) / (m+n))
/// squared so it stays rational, then one square root at the end.
inline ExactT exact_t(const std::vector<int>& wi, const std::vector<int>& wj, const Rational& a0, const Rational& ai) {
  const auto si = exact_stats(wi);
  const auto sj = exact_stats(wj);
  ExactT out;
  out.df = static_cast<int>(si.kinds + sj.kinds - 2);
  if (out.df == 0) return out;
  const Rational numer = si.modified_mean - sj.modified_mean - (a0 - ai);
  const Rational spread = si.count * si.variance + sj.count * sj.variance;
  const Rational scale = si.kinds * sj.kinds * (si.kinds + sj.kinds - 2) / (si.kinds + sj.kinds);
  const Rational squared = numer * numer * scale / spread;
  const long double mag = std::sqrt(squared.convert_to<long double>());
  out.t = numer < 0 ? -mag : mag;
  return out;
}

/// Random history with `n` ratings, uniform 1..5, and gaps drawn from a
/// mix of short bursts and long pauses.
inline RatingHistory random_history(std::mt19937_64& rng, std::size_t n, ItemId item = ItemId(1)) {
  std::uniform_int_distribution<int> rating(1, 5);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<Seconds> short_gap(0, 600);
  std::uniform_int_distribution<Seconds> long_gap(0, 7 * 86400);
  std::vector<RatingAction> acts;
  Timestamp t = std::uniform_int_distribution<Timestamp>(0, 1'000'000)(rng);
  for (std::size_t k = 0; k < n; ++k) {
    acts.push_back(RatingAction{item, UserId(static_cast<std::int64_t>(k + 1)), rating(rng), t});
    t += kind(rng) == 0 ? long_gap(rng) : short_gap(rng);
  }
  return RatingHistory(item, std::move(acts));
}

inline std::vector<int> ratings_of(const RatingHistory& h, std::size_t start, std::size_t end) {
  std::vector<int> out;
  for (std::size_t k = start; k < end; ++k) out.push_back(h[k].rating);
  return out;
}

/// History with the given ratings at timestamps start, start + step, ...
inline RatingHistory history_from(const std::vector<int>& ratings, Timestamp start = 0, Seconds step = 60,
                                  ItemId item = ItemId(1)) {
  std::vector<RatingAction> acts;
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    acts.push_back(RatingAction{item, UserId(static_cast<std::int64_t>(k + 1)), ratings[k],
                                start + static_cast<Timestamp>(k) * step});
  }
  return RatingHistory(item, std::move(acts));
}

inline RatingHistory history_at(const std::vector<Timestamp>& ts, int rating = 3, ItemId item = ItemId(1)) {
  std::vector<RatingAction> acts;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    acts.push_back(RatingAction{item, UserId(static_cast<std::int64_t>(k + 1)), rating, ts[k]});
  }
  return RatingHistory(item, std::move(acts));
}

}  // namespace tdti::support
