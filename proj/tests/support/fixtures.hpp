#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <vector>

#include "tdti/dti.hpp"
#include "tdti/types.hpp"

namespace tdti::support {

/// Four windows a million seconds apart: three ordinary windows with the
/// same rating mix spread over hours, and a third window that is a dense
/// burst of top ratings. With `worked_example_config()` DTI cuts exactly
/// between the four groups.
inline RatingHistory worked_example_history() {
  const std::vector<int> ordinary{3, 4, 5, 2, 4, 3, 4, 5};
  std::vector<RatingAction> acts;
  std::int64_t user = 1;
  auto add = [&](int rating, Timestamp ts) { acts.push_back(RatingAction{ItemId(7), UserId(user++), rating, ts}); };
  for (int w = 0; w < 4; ++w) {
    const Timestamp base = 1'000'000 * static_cast<Timestamp>(w + 1);
    if (w == 2) {
      for (int k = 0; k < 40; ++k) add(5, base + 20 * k);
      add(4, base + 800);
      add(3, base + 820);
    } else {
      for (std::size_t k = 0; k < ordinary.size(); ++k) add(ordinary[k], base + 3000 * static_cast<Timestamp>(k));
    }
  }
  return RatingHistory(ItemId(7), std::move(acts));
}

inline DtiConfig worked_example_config() { return DtiConfig{1400, 2}; }

/// Local MovieLens 100k u.data, from $TDTI_MOVIELENS or data/ml-100k/u.data
/// under the source tree.
inline std::optional<std::filesystem::path> movielens_path() {
  if (const char* env = std::getenv("TDTI_MOVIELENS")) {
    std::filesystem::path p(env);
    if (std::filesystem::exists(p)) return p;
  }
#ifdef TDTI_SOURCE_DIR
  std::filesystem::path p = std::filesystem::path(TDTI_SOURCE_DIR) / "data" / "ml-100k" / "u.data";
  if (std::filesystem::exists(p)) return p;
#endif
  return std::nullopt;
}

}  // namespace tdti::support
