#include "wsurg/key.hpp"

#include "wsurg/errors.hpp"

#include <algorithm>

namespace wsurg {

FSpec FSpec::complement(const SurfaceModel& model, const std::vector<std::string>& L) {
  FSpec f;
  for (const auto& c : model.components)
    if (std::find(L.begin(), L.end(), c.label) == L.end()) f.components.insert(c.label);
  return f;
}

std::optional<Mod2Class> FSpec::lower(const SurfaceModel& model) const {
  Mod2Class acc(model.lattice.rank());
  for (const auto& label : components) {
    const RealComponent* c = model.component(label);
    if (!c || !c->mod2_class) return std::nullopt;
    acc += *c->mod2_class;
  }
  if (!extra.bits.empty()) {
    if (extra.size() != acc.size()) throw ValidationError("F: explicit class has the wrong dimension");
    acc += extra;
  }
  return acc;
}

std::string FSpec::to_string() const {
  std::string s;
  for (const auto& c : components) s += (s.empty() ? "" : "+") + ("[" + c + "]");
  if (has_extra()) s += (s.empty() ? "" : "+") + ("<" + extra.to_string() + ">");
  return s.empty() ? "0" : s;
}

InvariantKey::InvariantKey(std::string surface_id, std::vector<std::string> l, FSpec f, ClassVec cls, long conj_pairs)
    : surface(std::move(surface_id)), L(std::move(l)), F(std::move(f)), d(std::move(cls)), s(conj_pairs) {
  std::sort(L.begin(), L.end());
  if (F.has_extra() == false) F.extra.bits.clear();
}

Integer InvariantKey::real_points(const SurfaceModel& model) const {
  return model.c1_degree(d) + genus() - 1 - 2 * s;
}

std::string InvariantKey::canonical() const {
  std::string out = surface + "|";
  for (const auto& l : L) out += l + ",";
  out += "|" + F.to_string() + "|" + d.to_string() + "|" + std::to_string(s);
  return out;
}

std::string InvariantKey::describe(const SurfaceModel& model) const {
  std::string l;
  for (const auto& x : L) l += (l.empty() ? "" : "+") + x;
  return "W[" + surface + "; L=" + l + "; F=" + F.to_string() + "](" + model.parser().format(d) + ", s=" +
         std::to_string(s) + ")";
}

void validate_key(const Catalog& catalog, const InvariantKey& key) {
  const SurfaceModel& m = catalog.surface(key.surface);
  auto fail = [&](const std::string& what) { throw ValidationError("invalid key " + key.describe(m) + ": " + what); };
  if (key.L.empty()) fail("L must name at least one real component");
  if (std::adjacent_find(key.L.begin(), key.L.end()) != key.L.end()) fail("L lists a component twice");
  for (const auto& l : key.L)
    if (!m.component(l)) fail("unknown real component '" + l + "'");
  for (const auto& c : key.F.components) {
    if (!m.component(c)) fail("F names unknown real component '" + c + "'");
    if (std::find(key.L.begin(), key.L.end(), c) != key.L.end()) fail("F must live in the complement of L");
  }
  if (key.F.has_extra() && key.F.extra.size() != m.lattice.rank()) fail("explicit F has the wrong dimension");
  if (key.d.size() != m.lattice.rank()) fail("class has the wrong dimension");
  if (key.s < 0) fail("s must be nonnegative");
  if (!m.involution.is_anti_invariant(key.d)) fail("d is not anti-invariant under the real structure");
  Integer c1d = m.c1_degree(key.d);
  Integer r = key.real_points(m);
  if (r < 0) fail("r = c1.d + g - 1 - 2s = " + r.str() + " is negative");
  if (key.genus() == 1 && (c1d == 0 || c1d == 2)) fail("genus 1 requires c1.d not in {0, 2}");
  if (key.genus() >= 1 && !parity_satisfiable(m, key.L, key.d, to_long(r)))
    fail("no distribution of the r = " + r.str() + " real points satisfies the parity condition");
}

}  // namespace wsurg
