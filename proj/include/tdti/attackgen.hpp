#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "tdti/types.hpp"

namespace tdti {

enum class AttackModel { Random, Average, Bandwagon };

std::string_view to_string(AttackModel m);
AttackModel parse_attack_model(std::string_view s);

inline constexpr Seconds kDefaultMaxSpan = 1000;

struct AttackConfig {
  AttackModel model{AttackModel::Random};
  Direction direction{Direction::Push};
  std::size_t attack_size{0};
  /// Fraction of the item universe each profile rates as filler.
  double filler_size{0.0};
  ItemId target;
  /// Bandwagon only; must be empty for the other models.
  std::vector<ItemId> selected_items;
  /// When unset, drawn uniformly from the target's history range so that the
  /// whole span still ends inside it.
  std::optional<Timestamp> injection_start;
  Seconds max_span{kDefaultMaxSpan};

  /// Throws Error describing the first violated constraint.
  void validate() const;
};

/// Fills the bandwagon selected item with the dataset's most-rated item.
AttackConfig make_attack_config(const Dataset& d, AttackModel model, Direction direction, std::size_t attack_size,
                                double filler_size, ItemId target);

struct InjectedAction {
  RatingAction action;
  std::size_t profile{0};

  friend bool operator==(const InjectedAction&, const InjectedAction&) = default;
};

/// Fake profiles generated for one attack, with ground-truth profile labels.
struct InjectionRecord {
  ItemId target;
  Direction direction{Direction::Push};
  std::size_t profile_count{0};
  std::vector<InjectedAction> actions;

  bool empty() const { return actions.empty(); }
  /// Injected actions on the target item.
  std::vector<RatingAction> target_actions() const;
  std::vector<RatingAction> all_actions() const;

  friend bool operator==(const InjectionRecord&, const InjectionRecord&) = default;
};

/// Builds `cfg.attack_size` profiles. Every profile rates the target 5 (push)
/// or 1 (nuke); filler items are a uniform sample of floor(filler_size * |I|)
/// items excluding the target and the selected items. Fake user ids start
/// above the largest real user id. The same (d, cfg, seed) always yields the
/// same record.
InjectionRecord generate_attack(const Dataset& d, const AttackConfig& cfg, std::uint64_t seed);

/// Merges the record into the dataset. Throws if a fake user id is already a real user.
Dataset inject(const Dataset& d, const InjectionRecord& rec);

/// Merges only the record's actions on `h`'s item into `h`.
RatingHistory inject_into_history(const RatingHistory& h, const InjectionRecord& rec);

/// JSON lines, one injected action per line with its profile `label`.
void write_injection_record(std::ostream& out, const InjectionRecord& rec);
InjectionRecord read_injection_record(std::istream& in);

}  // namespace tdti
