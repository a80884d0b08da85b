#include "wsurg/errors.hpp"
#include "wsurg/registry.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace wsurg {

extern const char* const kBuiltinRegistryJson;

namespace {

using nlohmann::json;

constexpr long kGridSpan = 12;
constexpr long kMaxS = 64;

std::string expr_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long>());
  throw ValidationError("expected an expression string or integer");
}

bool f_matches(const RegistryEntry& e, const SurfaceModel& m, const InvariantKey& key) {
  switch (e.f_kind) {
    case RegistryEntry::FKind::Zero: {
      if (key.F.is_formally_zero()) return true;
      auto low = key.F.lower(m);
      return low && low->is_zero();
    }
    case RegistryEntry::FKind::Complement: {
      FSpec comp = FSpec::complement(m, key.L);
      if (key.F == comp) return true;
      auto a = key.F.lower(m), b = comp.lower(m);
      return a && b && *a == *b;
    }
    case RegistryEntry::FKind::Class: {
      auto low = key.F.lower(m);
      return low && e.f_class && *low == *e.f_class;
    }
  }
  return false;
}

// Solves d = constant + p * direction for the (at most one) parameter p.
std::optional<std::map<std::string, Integer>> match_class(const RegistryEntry& e, const ClassVec& d) {
  std::map<std::string, Integer> bind;
  if (d.size() != e.pattern.constant.size()) return std::nullopt;
  ClassVec diff = d - e.pattern.constant;
  if (e.pattern.linear.empty()) {
    if (!diff.is_zero()) return std::nullopt;
  } else {
    const auto& [name, dir] = *e.pattern.linear.begin();
    std::size_t i = 0;
    while (i < dir.size() && dir[i] == 0) ++i;
    if (i == dir.size() || diff[i] % dir[i] != 0) return std::nullopt;
    Integer p = diff[i] / dir[i];
    if (!(p * dir == diff)) return std::nullopt;
    const auto& range = e.params.at(name);
    if (range.min && p < *range.min) return std::nullopt;
    if (range.max && p > *range.max) return std::nullopt;
    bind[name] = p;
  }
  return bind;
}

bool s_in_range(const RegistryEntry& e, std::map<std::string, Integer> bind, long s) {
  if (s < e.s_min.eval(bind) || s > e.s_max.eval(bind)) return false;
  bind["s"] = s;
  return !e.condition || e.condition->eval(bind) != 0;
}

RegistryEntry parse_entry(const json& j, const Catalog& catalog) {
  RegistryEntry e;
  e.surface = j.at("surface").get<std::string>();
  const SurfaceModel& m = catalog.surface(e.surface);
  const json& l = j.at("L");
  if (l.is_string() && l.get<std::string>() == "any") {
    e.L.reset();
  } else {
    auto v = l.get<std::vector<std::string>>();
    for (const auto& x : v)
      if (!m.component(x)) throw ValidationError("unknown component '" + x + "'");
    std::sort(v.begin(), v.end());
    e.L = v;
  }
  e.f_text = j.at("F").get<std::string>();
  if (e.f_text == "zero") {
    e.f_kind = RegistryEntry::FKind::Zero;
  } else if (e.f_text == "complement") {
    e.f_kind = RegistryEntry::FKind::Complement;
  } else if (e.f_text.rfind("class:", 0) == 0) {
    e.f_kind = RegistryEntry::FKind::Class;
    e.f_class = Mod2Class::reduce(m.parser().parse(e.f_text.substr(6)));
  } else {
    throw ValidationError("F must be 'zero', 'complement' or 'class:<expr>'");
  }
  e.class_text = j.at("class").get<std::string>();
  e.pattern = m.parser().parse_affine(e.class_text);
  if (e.pattern.linear.size() > 1) throw ValidationError("at most one class parameter per entry");
  const json params = j.value("params", json::object());
  for (const auto& [name, r] : params.items()) {
    RegistryEntry::Range range;
    if (r.contains("min")) range.min = r["min"].get<long>();
    if (r.contains("max")) range.max = r["max"].get<long>();
    e.params[name] = range;
  }
  for (const auto& [name, dir] : e.pattern.linear)
    if (!e.params.count(name)) throw ValidationError("parameter '" + name + "' has no declared range");
  e.s_min = Expr::parse(expr_text(j.value("s_min", json("0"))));
  e.s_max = Expr::parse(expr_text(j.at("s_max")));
  if (j.contains("condition")) e.condition = Expr::parse(j["condition"].get<std::string>());
  e.value = Expr::parse(expr_text(j.at("value")));
  e.citation = j.value("citation", "");
  e.quote = j.value("quote", "");
  if (e.citation.empty()) throw ValidationError("entry has no citation");
  return e;
}

// All instances of an entry on a bounded parameter grid.
void for_each_instance(const RegistryEntry& e, const SurfaceModel& m,
                       const std::function<void(const ClassVec&, long, const Integer&)>& fn) {
  std::vector<std::map<std::string, Integer>> binds{{}};
  for (const auto& [name, dir] : e.pattern.linear) {
    const auto& r = e.params.at(name);
    long lo = r.min.value_or(r.max ? *r.max - kGridSpan : -3);
    long hi = r.max.value_or(lo + kGridSpan);
    std::vector<std::map<std::string, Integer>> next;
    for (const auto& b : binds)
      for (long p = lo; p <= hi; ++p) {
        auto nb = b;
        nb[name] = p;
        next.push_back(nb);
      }
    binds = std::move(next);
  }
  for (const auto& b : binds) {
    std::map<std::string, long> lb;
    for (const auto& [k, v] : b) lb[k] = to_long(v);
    ClassVec d = e.pattern.evaluate(lb);
    long smin = std::max<long>(0, to_long(e.s_min.eval(b)));
    long smax = std::min<long>(kMaxS, to_long(e.s_max.eval(b)));
    for (long s = smin; s <= smax; ++s) {
      if (!s_in_range(e, b, s)) continue;
      auto vb = b;
      vb["s"] = s;
      fn(d, s, e.value.eval(vb));
    }
  }
  (void)m;
}

}  // namespace

Registry Registry::from_json(const json& doc, const Catalog& catalog) {
  if (!doc.is_array()) throw ValidationError("registry: expected an array of entries");
  Registry reg;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      reg.entries_.push_back(parse_entry(doc[i], catalog));
    } catch (const Error& e) {
      throw ValidationError("registry entry " + std::to_string(i) + ": " + e.what());
    } catch (const json::exception& e) {
      throw ValidationError("registry entry " + std::to_string(i) + ": " + e.what());
    }
  }

  // Every instance must name a valid invariant, and overlapping entries must agree.
  std::map<std::string, std::pair<Integer, std::size_t>> seen;
  for (std::size_t i = 0; i < reg.entries_.size(); ++i) {
    const auto& e = reg.entries_[i];
    const SurfaceModel& m = catalog.surface(e.surface);
    std::vector<std::vector<std::string>> Ls;
    if (e.L) Ls.push_back(*e.L);
    else
      for (const auto& c : m.components) Ls.push_back({c.label});
    try {
      for_each_instance(e, m, [&](const ClassVec& d, long s, const Integer& v) {
        for (const auto& L : Ls) {
          FSpec f;
          if (e.f_kind == RegistryEntry::FKind::Complement) f = FSpec::complement(m, L);
          else if (e.f_kind == RegistryEntry::FKind::Class) f = FSpec::of_class(*e.f_class);
          InvariantKey key(e.surface, L, f, d, s);
          validate_key(catalog, key);
          std::string k = key.canonical();
          auto [it, fresh] = seen.emplace(k, std::make_pair(v, i));
          if (!fresh && it->second.first != v)
            throw ValidationError("conflicts with entry " + std::to_string(it->second.second) + " at " +
                                  key.describe(m) + ": " + v.str() + " vs " + it->second.first.str());
        }
      });
    } catch (const Error& err) {
      throw ValidationError("registry entry " + std::to_string(i) + " (" + e.surface + ", " + e.class_text +
                            "): " + err.what());
    }
  }
  return reg;
}

Registry Registry::load_file(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open registry file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("registry file '" + path + "': " + e.what());
  }
  return from_json(j, catalog);
}

const std::string& Registry::builtin_text() {
  static const std::string text = kBuiltinRegistryJson;
  return text;
}

std::optional<RegistryMatch> Registry::lookup(const Catalog& catalog, const InvariantKey& key) const {
  const SurfaceModel& m = catalog.surface(key.surface);
  for (const auto& e : entries_) {
    if (e.surface != key.surface) continue;
    if (e.L ? *e.L != key.L : key.L.size() != 1) continue;
    if (!f_matches(e, m, key)) continue;
    auto bind = match_class(e, key.d);
    if (!bind || !s_in_range(e, *bind, key.s)) continue;
    auto vb = *bind;
    vb["s"] = key.s;
    return RegistryMatch{e.value.eval(vb), &e, *bind};
  }
  return std::nullopt;
}

Integer closed_form_conic(long n, long b, long s, ConicR R) {
  if (n < 1 || s < 0) throw ValidationError("closed_form_conic: need n >= 1 and s >= 0");
  if (n == 1) {
    if (b < -2) throw ValidationError("closed_form_conic: need b >= -2 for n = 1");
    if (R != ConicR::Empty) throw ValidationError("closed_form_conic: X1 has no real component besides S1");
    if (s <= b + 1) return pow2(2 * b + 2 - s);
    if (s == b + 2) return (b % 2 != 0) ? pow2(b + 1) : Integer(0);
    throw ValidationError("closed_form_conic: s out of range");
  }
  if (b < n - 3 || s > b - n + 3) throw ValidationError("closed_form_conic: need b >= n-3 and s <= b-n+3");
  switch (R) {
    case ConicR::Empty: return pow2(2 * b + 2 - s);
    case ConicR::Full: return s == b - n + 3 ? sign_pow(b + 1) * pow2(b + n - 1) : Integer(0);
    case ConicR::Partial:
      if (n < 3) throw ValidationError("closed_form_conic: a proper nonempty R needs n >= 3");
      return 0;
  }
  return 0;
}

}  // namespace wsurg
