#include "tdti/taxonomy.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace tdti {

std::string_view to_string(ItemClass c) {
  switch (c) {
    case ItemClass::Fad: return "fad";
    case ItemClass::Fashion: return "fashion";
    case ItemClass::Style: return "style";
    case ItemClass::Scallop: return "scallop";
  }
  return "fad";
}

ItemClass parse_item_class(std::string_view s) {
  for (ItemClass c : kItemClasses) {
    if (to_string(c) == s) return c;
  }
  throw Error("unknown item class '" + std::string(s) + "'");
}

namespace {

Timestamp lower_quantile(const RatingHistory& h, double q) {
  const auto idx = static_cast<std::size_t>(q * static_cast<double>(h.size() - 1));
  return h[idx].ts;
}

template <typename T>
double median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return static_cast<double>(v[n / 2]);
  return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

}  // namespace

ItemShape item_shape(const RatingHistory& h, Seconds dataset_span) {
  ItemShape s;
  s.rating_count = h.size();
  if (h.empty() || dataset_span <= 0) return s;
  const Seconds iqr = lower_quantile(h, 0.75) - lower_quantile(h, 0.25);
  s.concentration = static_cast<double>(iqr) / static_cast<double>(dataset_span);
  return s;
}

std::map<ItemId, ItemClass> classify_items(const Dataset& d) {
  std::map<ItemId, ItemClass> out;
  if (d.item_count() == 0) return out;

  const auto [lo, hi] = d.time_range();
  std::map<ItemId, ItemShape> shapes;
  std::vector<std::size_t> counts;
  std::vector<double> concentrations;
  for (const auto& [item, h] : d.histories()) {
    const auto s = item_shape(h, hi - lo);
    shapes.emplace(item, s);
    counts.push_back(s.rating_count);
    concentrations.push_back(s.concentration);
  }
  const double count_split = median(counts);
  const double concentration_split = median(concentrations);

  for (const auto& [item, s] : shapes) {
    const bool many = static_cast<double>(s.rating_count) > count_split;
    const bool concentrated = s.concentration <= concentration_split;
    ItemClass c = ItemClass::Scallop;
    if (concentrated) {
      c = many ? ItemClass::Fashion : ItemClass::Fad;
    } else if (!many) {
      c = ItemClass::Style;
    }
    out.emplace(item, c);
  }
  return out;
}

}  // namespace tdti
