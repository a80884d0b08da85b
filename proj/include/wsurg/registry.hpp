#pragma once

// Imported base values and closed forms: the leaves of every recursion.

#include "wsurg/key.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wsurg {

/// Integer expressions over named variables: + - * / (exact) % (mathematical
/// modulus) ^ (nonnegative power), comparisons, && || !, and c ? a : b.
class Expr {
 public:
  struct Node;

  static Expr parse(const std::string& text);
  /// Throws ValidationError on unbound variables, inexact division or
  /// negative powers.
  Integer eval(const std::map<std::string, Integer>& vars) const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

struct RegistryEntry {
  std::string surface;
  std::optional<std::vector<std::string>> L;  // absent: any single component
  enum class FKind { Zero, Complement, Class } f_kind = FKind::Zero;
  std::string f_text;
  std::string class_text;
  AffineClass pattern;
  struct Range {
    std::optional<long> min, max;
  };
  std::map<std::string, Range> params;
  Expr s_min, s_max;
  std::optional<Expr> condition;
  Expr value;
  std::string citation;
  std::string quote;
  // resolved against the catalog at load
  std::optional<Mod2Class> f_class;
};

struct RegistryMatch {
  Integer value;
  const RegistryEntry* entry = nullptr;
  std::map<std::string, Integer> bindings;
};

class Registry {
 public:
  /// Parses and validates entries against the catalog. Fails on missing
  /// citations, unknown surfaces/components, non-integer values on the
  /// parameter grid, and overlapping entries that disagree.
  static Registry from_json(const nlohmann::json& doc, const Catalog& catalog);
  static Registry load_file(const std::string& path, const Catalog& catalog);
  static const std::string& builtin_text();

  std::optional<RegistryMatch> lookup(const Catalog& catalog, const InvariantKey& key) const;
  const std::vector<RegistryEntry>& entries() const { return entries_; }

 private:
  std::vector<RegistryEntry> entries_;
};

/// Closed forms for W_{X_n, S_1, [R]}(c1 + b Phi, s) on the minimal conic
/// bundles; test oracle only, never consulted by compute().
enum class ConicR { Empty, Full, Partial };
Integer closed_form_conic(long n, long b, long s, ConicR R);

}  // namespace wsurg
