#pragma once

// Names of individual invariants W_{X,L,F}(d,s).

#include "wsurg/surfaces.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wsurg {

/// The class F in H_2(X minus L; Z/2): a formal union of real components
/// plus an explicit mod-2 summand.
struct FSpec {
  std::set<std::string> components;
  Mod2Class extra;  // empty (size 0) means no explicit summand

  static FSpec zero() { return {}; }
  static FSpec of_components(std::set<std::string> labels) { return {std::move(labels), {}}; }
  static FSpec of_class(const Mod2Class& c) { return {{}, c}; }
  /// [RX minus L].
  static FSpec complement(const SurfaceModel& model, const std::vector<std::string>& L);

  bool has_extra() const { return !extra.bits.empty() && !extra.is_zero(); }
  bool is_formally_zero() const { return components.empty() && !has_extra(); }
  /// The mod-2 class, when every named component has a known class.
  std::optional<Mod2Class> lower(const SurfaceModel& model) const;
  std::string to_string() const;

  friend bool operator==(const FSpec& a, const FSpec& b) {
    return a.components == b.components && a.has_extra() == b.has_extra() && (!a.has_extra() || a.extra == b.extra);
  }
};

struct InvariantKey {
  std::string surface;
  std::vector<std::string> L;  // sorted
  FSpec F;
  ClassVec d;
  long s = 0;

  InvariantKey() = default;
  InvariantKey(std::string surface_id, std::vector<std::string> l, FSpec f, ClassVec cls, long conj_pairs);

  long genus() const { return static_cast<long>(L.size()) - 1; }
  /// Number of real points: c1.d + g - 1 - 2s.
  Integer real_points(const SurfaceModel& model) const;
  /// Stable text form, also used as the memo key.
  std::string canonical() const;
  /// Human-readable form using the surface's class names.
  std::string describe(const SurfaceModel& model) const;
};

/// Throws ValidationError for keys that do not name an invariant: unknown
/// surface or components, F meeting L, d not anti-invariant, r < 0, the
/// genus-1 exclusions c1.d in {0, 2}, and failed parity conditions.
void validate_key(const Catalog& catalog, const InvariantKey& key);

}  // namespace wsurg
