#include "engine_ctx.hpp"

#include "wsurg/errors.hpp"

#include <algorithm>

namespace wsurg {

using detail::leaf;
using detail::node;

namespace {

std::string join_classes(const SurfaceModel& m, const std::vector<ClassVec>& cs) {
  std::string s;
  for (const auto& c : cs) s += (s.empty() ? "" : ",") + m.parser().format(c);
  return s;
}

std::string describe(const Catalog& cat, const RelativeKey& k) {
  const SurfaceModel& m = cat.surface(k.base.surface);
  std::string l, l0;
  for (const auto& x : k.base.L) l += (l.empty() ? "" : "+") + x;
  for (const auto& x : k.L0) l0 += (l0.empty() ? "" : "+") + x;
  return "W^{U=[" + join_classes(m, k.U) + "],V=[" + join_classes(m, k.V) + "]}[" + k.base.surface + "; L=" + l +
         "; L0=" + (l0.empty() ? "-" : l0) + "; F=" + k.base.F.to_string() + "](" + m.parser().format(k.base.d) +
         ", s=" + std::to_string(k.base.s) + ")";
}

void check_sphere(const SurfaceModel& m, const ClassVec& e, const char* role) {
  const auto& lat = m.lattice;
  if (e.size() != lat.rank()) throw ValidationError(std::string(role) + " class has the wrong dimension");
  if (pair(lat, e, e) != -2 || m.c1_degree(e) != 0 || !m.involution.is_anti_invariant(e))
    throw ValidationError(std::string(role) + " class " + m.parser().format(e) +
                          " is not an anti-invariant (-2)-class of c1-degree 0 on " + m.id);
}

bool same_sphere(const ClassVec& a, const ClassVec& b) { return a == b || a == -b; }

}  // namespace

WValue Engine::reduce_relative(const RelativeKey& key) const {
  const SurfaceModel& m = catalog_->surface(key.base.surface);
  if (key.base.d.size() != m.lattice.rank()) throw ValidationError("class has the wrong dimension");
  if (!m.involution.is_anti_invariant(key.base.d)) throw ValidationError("d is not anti-invariant");
  for (const auto& e : key.U) check_sphere(m, e, "U");
  for (const auto& e : key.V) check_sphere(m, e, "V");
  if (!key.V.empty() && !key.assert_V_boundary)
    throw ValidationError("V is nonempty: assert that every real circle of V bounds in L or L0");
  Ctx ctx;
  return reduce_relative_impl(key, ctx);
}

WValue Engine::reduce_relative_impl(const RelativeKey& key, Ctx& ctx) const {
  const SurfaceModel& m = catalog_->surface(key.base.surface);
  if (!key.U.empty()) {
    RelativeKey k = key;
    Integer de = pair(m.lattice, key.base.d, key.U.back());
    if (de % 2 != 0) throw ValidationError("d.E is odd for E in U");
    // A curve class with d.E < 0 and not contained in E has no representatives.
    if (de < 0) return {0, leaf(0, "vanishing", describe(*catalog_, key), "d.E < 0 for E in U")};
    long mm = to_long(de / 2);
    k.U.pop_back();
    const ClassVec E = key.U.back();
    WValue w = series(
        "cor_reduction", key.base, E, 2, [mm](long j) { return reduction_coefficient(mm, j); },
        [&](const InvariantKey& tk) {
          RelativeKey t = k;
          t.base = tk;
          return reduce_relative_impl(t, ctx);
        },
        describe(*catalog_, key));
    return w;
  }
  if (!key.V.empty()) {
    const ClassVec& E = key.V.back();
    for (const SurgeryRecord* rec : catalog_->surgeries_from(key.base.surface))
      if (rec->sphere.circle_on && same_sphere(rec->sphere.cls, E))
        return relations2(key, key.V.size() - 1, *rec);
    throw UnknownValue("no catalog surgery of " + key.base.surface + " along " + m.parser().format(E) +
                       " with a real circle");
  }
  FSpec f = key.base.F;
  for (const auto& l : key.L0) {
    if (f.components.count(l)) f.components.erase(l);
    else f.components.insert(l);
  }
  InvariantKey abs(key.base.surface, key.base.L, f, key.base.d, key.base.s);
  WValue w;
  if (auto why = vanishing_reason(m, abs)) {
    w = {0, leaf(0, "vanishing", abs.describe(m), *why)};
  } else {
    validate_key(*catalog_, abs);
    w = resolve(abs, ctx);
  }
  return {w.value, node(w.value, "relative_base", describe(*catalog_, key), "no U, no V: F + [L0]", {1},
                        {w.provenance})};
}

WValue Engine::cor_reduction(const RelativeKey& key, std::size_t u_index) const {
  if (u_index >= key.U.size()) throw ValidationError("cor_reduction: index out of range");
  RelativeKey k = key;
  std::rotate(k.U.begin() + static_cast<long>(u_index), k.U.begin() + static_cast<long>(u_index) + 1, k.U.end());
  return reduce_relative(k);
}

WValue Engine::relations1_forward(const RelativeKey& key, const ClassVec& E) const {
  const SurfaceModel& m = catalog_->surface(key.base.surface);
  check_sphere(m, E, "E");
  Integer de = pair(m.lattice, key.base.d, E);
  if (de % 2 != 0 || de < 0) throw ValidationError("relations1_forward needs d.E even and nonnegative");
  long mm = to_long(de / 2);
  RelativeKey with = key;
  with.U.push_back(E);
  for (const auto& e : with.U) check_sphere(m, e, "U");
  Ctx ctx;
  return series(
      "relations1_forward", key.base, E, 2, [mm](long j) { return forward_coefficient(mm, j); },
      [&](const InvariantKey& tk) {
        RelativeKey t = with;
        t.base = tk;
        return reduce_relative_impl(t, ctx);
      },
      describe(*catalog_, key));
}

WValue Engine::relations1_surgery(const RelativeKey& x_key, std::size_t u_index, const SurgeryRecord& rec) const {
  const SurfaceModel& x = catalog_->surface(x_key.base.surface);
  if (rec.source != x.id) throw ValidationError("the surgery does not start from " + x.id);
  if (u_index >= x_key.U.size()) throw ValidationError("relations1_surgery: index out of range");
  const ClassVec E = x_key.U[u_index];
  if (!same_sphere(rec.sphere.cls, E)) throw ValidationError("the surgery is not along the chosen element of U");
  if (!x_key.V.empty()) throw ValidationError("relations1_surgery supports V = {} only");
  for (const auto& e : x_key.U) check_sphere(x, e, "U");
  if (pair(x.lattice, x_key.base.d, E) != 0) throw ValidationError("relations1_surgery needs d.E = 0");
  auto fx = x_key.base.F.lower(x);
  if (!fx || pair_mod2(x.lattice, *fx, Mod2Class::reduce(E)) != 0)
    throw ValidationError("relations1_surgery needs F normal to E");
  for (const auto& c : x_key.base.F.components)
    if (rec.sphere.circle_on && c == *rec.sphere.circle_on)
      throw ValidationError("F contains the component cut by E");

  // Labels on the result, for the record.
  RelativeKey y_key = x_key;
  y_key.base.surface = rec.target;
  y_key.U.erase(y_key.U.begin() + static_cast<long>(u_index));
  y_key.base.L.clear();
  for (const auto& l : x_key.base.L) {
    auto it = std::find_if(rec.origin.begin(), rec.origin.end(),
                           [&](const auto& kv) { return kv.second.source == l && !kv.second.plus_class; });
    if (it == rec.origin.end()) throw ValidationError("L meets the real locus of E");
    y_key.base.L.push_back(it->first);
  }
  y_key.L0.clear();
  for (const auto& [label, o] : rec.origin)
    if (o.source && std::find(x_key.L0.begin(), x_key.L0.end(), *o.source) != x_key.L0.end())
      y_key.L0.push_back(label);

  Ctx ctx;
  WValue w = series(
      "relations1_surgery", x_key.base, E, 1, [](long k) { return pow2(k); },
      [&](const InvariantKey& tk) {
        RelativeKey t = x_key;
        t.base = tk;
        return reduce_relative_impl(t, ctx);
      },
      describe(*catalog_, y_key));
  auto p = std::make_shared<Provenance>(*w.provenance);
  p->note = "surgery of " + x.id + " along " + x.parser().format(E) + " in U";
  return {w.value, p};
}

WValue Engine::relations2(const RelativeKey& x_key, std::size_t v_index, const SurgeryRecord& rec) const {
  const SurfaceModel& x = catalog_->surface(x_key.base.surface);
  if (rec.source != x.id) throw ValidationError("the surgery does not start from " + x.id);
  if (v_index >= x_key.V.size()) throw ValidationError("relations2: index out of range");
  if (!same_sphere(rec.sphere.cls, x_key.V[v_index])) throw ValidationError("the surgery is not along V");
  if (!rec.sphere.circle_on) throw ValidationError("elements of V must have a real circle");
  if (!x_key.assert_V_boundary) throw ValidationError("relations2 needs the V boundary assertion");
  const SurfaceModel& y = catalog_->surface(rec.target);
  RelativeKey y_key = x_key;
  y_key.base.surface = y.id;
  y_key.V.erase(y_key.V.begin() + static_cast<long>(v_index));
  if (auto f = x_key.base.F.lower(y); f && pair_mod2(y.lattice, *f, Mod2Class::reduce(rec.sphere.cls)) != 0)
    throw ValidationError("F is not orthogonal to the class of V");
  Ctx ctx;
  WValue w = reduce_relative_impl(y_key, ctx);
  return {w.value, node(w.value, "relations2", describe(*catalog_, x_key),
                        "surgery of " + x.id + " along " + x.parser().format(rec.sphere.cls) + " in V", {1},
                        {w.provenance})};
}

}  // namespace wsurg
