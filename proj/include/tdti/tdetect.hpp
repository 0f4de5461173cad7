#pragma once

#include <array>
#include <limits>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tdti/dti.hpp"
#include "tdti/types.hpp"

namespace tdti {

/// Rating statistics of one window.
///
/// The modified mean divides the rating sum by the number of distinct rating
/// values instead of the rating count, so it grows with window size; this is
/// what lets dense bursts stand out against sparse normal windows.
struct WindowStats {
  std::size_t count{0};       ///< g: ratings in the window
  int kinds{0};               ///< rk: distinct rating values
  std::int64_t rating_sum{0};
  double modified_mean{0.0};  ///< rating_sum / kinds
  double mean{0.0};           ///< rating_sum / count
  double variance{0.0};       ///< population variance about `mean`
};

WindowStats window_stats(const TimeWindow& w, const RatingHistory& h);

/// Two-tailed 95% critical values of Student's t for df = 1..8.
inline constexpr std::array<double, 8> kCriticalValues95{12.71, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306};

/// Throws Error for df outside [1, 8].
double critical_value(int df);

struct PairResult {
  double t_value{0.0};
  int df{0};
  /// Infinite when df == 0: such pairs are treated as consistent.
  double boundary{std::numeric_limits<double>::infinity()};
  int flag{0};
};

/// Modified two-sample T between windows i and j.
///
/// `history_mean` is the mean rating of the whole history and `mean_without_i`
/// the mean with window i removed; their difference corrects for how much
/// window i itself shifts the history mean.
PairResult t_statistic(const WindowStats& i, const WindowStats& j, double history_mean, double mean_without_i);

class PairwiseFlagMatrix {
 public:
  PairwiseFlagMatrix() = default;
  explicit PairwiseFlagMatrix(std::size_t m) : m_(m), cells_(m * m), z_(m, 0) {}

  std::size_t size() const { return m_; }
  const PairResult& at(std::size_t i, std::size_t j) const { return cells_[i * m_ + j]; }
  PairResult& at(std::size_t i, std::size_t j) { return cells_[i * m_ + j]; }

  /// Count of 1-flags in each row.
  const std::vector<int>& z() const { return z_; }
  std::vector<int>& z() { return z_; }

 private:
  std::size_t m_{0};
  std::vector<PairResult> cells_;
  std::vector<int> z_;
};

PairwiseFlagMatrix flag_matrix(const WindowPartition& p, const RatingHistory& h);

/// Indices of windows whose flag count is at least the mean while being no
/// longer than the mean duration and no smaller than the mean size. Returns
/// nothing when there is a single window or all windows tie on (z, wd, ws).
std::vector<std::size_t> detect_abnormal_windows(const WindowPartition& p, const PairwiseFlagMatrix& fm);

/// Ratings of `w` at or above (push) or at or below (nuke) the window mean.
std::vector<RatingAction> extract_abnormal_ratings(const RatingHistory& h, const TimeWindow& w, Direction direction);

struct FlaggedWindow {
  std::size_t window{0};
  std::vector<RatingAction> actions;
};

struct DetectionReport {
  ItemId item;
  Direction direction{Direction::Push};
  DtiConfig config;
  WindowPartition partition;
  std::vector<int> z;
  std::vector<std::size_t> abnormal_windows;
  std::vector<FlaggedWindow> flagged;

  std::vector<RatingAction> flagged_actions() const;
};

DetectionReport detect_item(const RatingHistory& h, const DtiConfig& cfg, Direction direction);

nlohmann::json to_json(const DetectionReport& r);
/// Rebuilds the flagged-action part of a serialized report.
DetectionReport detection_report_from_json(const nlohmann::json& j);

}  // namespace tdti
