#pragma once

#include <cstdint>

#include "tdti/types.hpp"

namespace tdti {

/// Shape of a synthetic rating log. Defaults approximate MovieLens 100k:
/// 943 users, 1682 items, 100000 ratings over about seven months.
struct SyntheticLogConfig {
  std::size_t users{943};
  std::size_t items{1682};
  std::size_t ratings{100000};
  Timestamp start{874724710};
  Seconds span{215 * 86400};
  std::uint64_t seed{1};
};

/// Generates a log with heavy-tailed item popularity, users who rate in
/// short sessions, and a share of items whose ratings cluster around a
/// release date. Each (user, item) pair is rated at most once.
Dataset generate_synthetic_log(const SyntheticLogConfig& cfg);

}  // namespace tdti
