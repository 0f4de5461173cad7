#pragma once

#include <array>
#include <map>
#include <string_view>

#include "tdti/types.hpp"

namespace tdti {

/// Item types by rating volume and temporal concentration:
///   fad      concentrated, few ratings
///   fashion  concentrated, many ratings
///   style    scattered, few ratings
///   scallop  scattered, many ratings
enum class ItemClass { Fad, Fashion, Style, Scallop };

inline constexpr std::array<ItemClass, 4> kItemClasses{ItemClass::Fad, ItemClass::Fashion, ItemClass::Style,
                                                       ItemClass::Scallop};

std::string_view to_string(ItemClass c);
ItemClass parse_item_class(std::string_view s);

struct ItemShape {
  std::size_t rating_count{0};
  /// Interquartile timestamp range divided by the dataset's full time span.
  double concentration{0.0};
};

ItemShape item_shape(const RatingHistory& h, Seconds dataset_span);

/// Median-split classification. An item has "many" ratings when its count
/// exceeds the median item count, and is "concentrated" when its
/// concentration is at most the median concentration. Quartiles use the
/// lower nearest rank, sorted[floor(q * (n - 1))].
std::map<ItemId, ItemClass> classify_items(const Dataset& d);

}  // namespace tdti
