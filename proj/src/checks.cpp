#include "wsurg/checks.hpp"

#include "wsurg/errors.hpp"

namespace wsurg {

namespace {

// Classes of H_2(X; Z/2) fixed by the involution and orthogonal to s: the
// kernel of T - I stacked with the row G s, all mod 2.
std::vector<Mod2Class> invariant_mod2_perp(const SurfaceModel& m, const ClassVec& s) {
  const auto& t = m.involution.matrix;
  const std::size_t n = m.lattice.rank();
  std::vector<Mod2Class> rows;
  for (std::size_t i = 0; i < n; ++i) {
    ClassVec r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = t(i, j) - (i == j ? 1 : 0);
    rows.push_back(Mod2Class::reduce(r));
  }
  ClassVec gs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gs[i] += m.lattice.gram()(i, j) * s[j];
  rows.push_back(Mod2Class::reduce(gs));
  return mod2_kernel(rows, n);
}

}  // namespace

std::vector<CheckResult> check_surgery(const Catalog& catalog, const SurgeryRecord& rec) {
  std::vector<CheckResult> out;
  const std::string tag = rec.source + " -> " + rec.target + ": ";
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    out.push_back({tag + name, ok, ok ? "" : detail});
  };
  const SurfaceModel& x = catalog.surface(rec.source);
  const SurfaceModel& y = catalog.surface(rec.target);
  const auto& lat = x.lattice;
  const ClassVec& s = rec.sphere.cls;
  const std::string sname = x.parser().format(s);

  add("[S]^2 = -2", pair(lat, s, s) == -2, "[S]^2 = " + pair(lat, s, s).str() + " for S = " + sname);
  add("c1.[S] = 0", x.c1_degree(s) == 0, "c1.S = " + x.c1_degree(s).str());
  long jump = y.euler_char() - x.euler_char();
  add("Euler characteristic jump", (jump == 2 || jump == -2) && jump == rec.chi_delta,
      "chi changes by " + std::to_string(jump) + ", record says " + std::to_string(rec.chi_delta));
  add("same lattice", y.lattice == lat, "the target lattice differs from the source");

  bool iso = true;
  std::string why;
  try {
    y.involution.validate(y.lattice);
  } catch (const ValidationError& e) {
    iso = false;
    why = e.what();
  }
  add("tau_Y involutive isometry", iso, why);
  add("tau_Y = tau_X o r_S", y.involution.matrix == x.involution.matrix * reflection_matrix(lat, s),
      "the target involution is not the source involution composed with the reflection in " + sname);

  add("S anti-invariant for tau_X", x.involution.is_anti_invariant(s), sname + " is not tau_X anti-invariant");
  add("S invariant for tau_Y", y.involution.is_invariant(s), sname + " is not tau_Y invariant");
  auto minus_x = eigenlattice(x.involution, -1), minus_y = eigenlattice(y.involution, -1);
  add("rank drop of the -1 eigenlattice", minus_x.size() == minus_y.size() + 1,
      "ranks " + std::to_string(minus_x.size()) + " and " + std::to_string(minus_y.size()));
  std::string bad;
  for (const auto& v : minus_y)
    if (pair(lat, v, s) != 0) bad = x.parser().format(v);
  add("-1 eigenlattice of tau_Y orthogonal to S", bad.empty(), bad + " pairs nontrivially with " + sname);
  add("S in the -1 eigenlattice of tau_X", lattice_contains(minus_x, s), sname + " is not in the eigenlattice");

  add("mod-2 invariant classes agree in [S]^perp", invariant_mod2_perp(x, s) == invariant_mod2_perp(y, s),
      "the tau-invariant mod-2 classes differ inside [S]^perp");
  return out;
}

std::vector<CheckResult> check_catalog(const Catalog& catalog) {
  std::vector<CheckResult> out;
  for (const auto& id : catalog.ids()) {
    CheckResult r{id + ": model invariants", true, ""};
    try {
      catalog.surface(id).validate();
    } catch (const ValidationError& e) {
      r.ok = false;
      r.detail = e.what();
    }
    out.push_back(r);
  }
  for (const auto& rec : catalog.surgeries()) {
    auto part = check_surgery(catalog, rec);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace wsurg
