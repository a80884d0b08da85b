#include "wsurg/errors.hpp"
#include "wsurg/surfaces.hpp"

#include <fstream>
#include <sstream>

namespace wsurg {

extern const char* const kBuiltinCatalogJson;

namespace {

using nlohmann::json;

Mod2Class parse_mod2(const ClassParser& p, const std::string& text) { return Mod2Class::reduce(p.parse(text)); }

IntMatrix matrix_from_json(const json& rows, const std::string& what) {
  if (!rows.is_array()) throw ValidationError(what + " must be an array of rows");
  std::vector<std::vector<long>> r;
  for (const auto& row : rows) r.push_back(row.get<std::vector<long>>());
  return IntMatrix::from_rows(r);
}

SurfaceModel base_surface(const std::string& id, const json& j) {
  SurfaceModel m;
  m.id = id;
  auto labels = j.at("basis").get<std::vector<std::string>>();
  m.lattice = IntersectionLattice(matrix_from_json(j.at("gram"), "gram"), labels);
  // Stored row-major; column j is the image of basis vector j.
  m.involution.matrix = matrix_from_json(j.at("involution"), "involution");
  ClassParser p(m.lattice, {});
  m.c1 = p.parse(j.at("c1").get<std::string>());
  m.aliases["c1"] = m.c1;
  ClassParser pa(m.lattice, m.aliases);
  const json components = j.value("components", json::array());
  for (const auto& c : components) {
    RealComponent rc;
    rc.label = c.at("label").get<std::string>();
    rc.topo = Topology::parse(c.at("topology").get<std::string>());
    if (c.contains("mod2_class")) rc.mod2_class = parse_mod2(pa, c["mod2_class"].get<std::string>());
    if (c.contains("parity_form")) rc.parity_form = parse_mod2(pa, c["parity_form"].get<std::string>());
    else if (rc.topo.kind == Topology::Kind::Sphere) rc.parity_form = Mod2Class(m.lattice.rank());
    m.components.push_back(std::move(rc));
  }
  return m;
}

std::vector<BlowupPoint> blowup_points(const json& arr) {
  std::vector<BlowupPoint> pts;
  for (const auto& p : arr) {
    BlowupPoint bp;
    if (p.contains("conj")) {
      bp.real = false;
      bp.labels = p["conj"].get<std::vector<std::string>>();
    } else if (p.contains("real_on")) {
      bp.real = true;
      bp.on = p["real_on"].get<std::string>();
      bp.labels = {p.at("label").get<std::string>()};
      if (p.contains("rename")) bp.rename = p["rename"].get<std::string>();
    } else {
      throw ValidationError("blow-up point needs 'conj' or 'real_on'");
    }
    pts.push_back(std::move(bp));
  }
  return pts;
}

}  // namespace

Catalog Catalog::from_json(const json& recipe) {
  Catalog cat;
  cat.recipe_ = recipe;
  if (!recipe.contains("surfaces") || !recipe["surfaces"].is_array())
    throw ValidationError("catalog: missing 'surfaces' array");
  for (const auto& entry : recipe["surfaces"]) {
    std::string id = entry.at("id").get<std::string>();
    try {
      if (cat.has(id)) throw ValidationError("duplicate surface id");
      SurfaceModel m;
      if (entry.contains("basis")) {
        m = base_surface(id, entry);
      } else if (entry.contains("blowup")) {
        const auto& b = entry["blowup"];
        BlowupRecord rec;
        m = blowup(cat.surface(b.at("from").get<std::string>()), id, blowup_points(b.at("points")), &rec);
        cat.blowups_.push_back(std::move(rec));
      } else if (entry.contains("surgery")) {
        const auto& s = entry["surgery"];
        const SurfaceModel& src = cat.surface(s.at("from").get<std::string>());
        SphereSpec sp;
        sp.cls = src.parser().parse(s.at("class").get<std::string>());
        if (s.contains("circle_on") && !s["circle_on"].is_null()) sp.circle_on = s["circle_on"].get<std::string>();
        sp.pieces = s.at("pieces").get<std::vector<std::string>>();
        for (const auto& t : s.value("piece_topology", std::vector<std::string>{}))
          sp.piece_topology.push_back(Topology::parse(t));
        SurgeryRecord rec;
        m = surgery(src, id, sp, &rec);
        cat.surgeries_.push_back(std::move(rec));
      } else {
        throw ValidationError("entry needs one of 'basis', 'blowup', 'surgery'");
      }
      if (entry.contains("description")) m.description = entry["description"].get<std::string>();
      const json aliases = entry.value("aliases", json::object());
      for (const auto& [name, expr] : aliases.items()) {
        if (m.lattice.index_of(name) >= 0) throw ValidationError("alias '" + name + "' shadows a basis label");
        m.aliases[name] = m.parser().parse(expr.get<std::string>());
      }
      for (const auto& t : entry.value("twistable", std::vector<std::string>{}))
        m.twistable.push_back(m.parser().parse(t));
      for (const auto& t : entry.value("tags", std::vector<std::string>{})) m.tags.insert(t);
      m.validate();
      cat.order_.push_back(id);
      cat.surfaces_.emplace(id, std::move(m));
    } catch (const Error& e) {
      throw ValidationError("catalog entry '" + id + "': " + e.what());
    } catch (const json::exception& e) {
      throw ValidationError("catalog entry '" + id + "': " + e.what());
    }
  }
  const json equivalences = recipe.value("equivalences", json::array());
  for (const auto& e : equivalences) {
    Equivalence eq{e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.value("note", "")};
    if (!cat.has(eq.a) || !cat.has(eq.b)) throw ValidationError("equivalence names an unknown surface");
    auto la = cat.surface(eq.a).component_labels(), lb = cat.surface(eq.b).component_labels();
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    if (la != lb || !(cat.surface(eq.a).lattice.gram() == cat.surface(eq.b).lattice.gram()))
      throw ValidationError("equivalent surfaces '" + eq.a + "' and '" + eq.b +
                            "' must share component labels and intersection form");
    cat.equivalences_.push_back(std::move(eq));
  }
  return cat;
}

Catalog Catalog::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open catalog file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("catalog file '" + path + "': " + e.what());
  }
  return from_json(j);
}

const std::string& Catalog::builtin_recipe_text() {
  static const std::string text = kBuiltinCatalogJson;
  return text;
}

const Catalog& Catalog::builtin() {
  static const Catalog cat = from_json(json::parse(builtin_recipe_text()));
  return cat;
}

const SurfaceModel& Catalog::surface(const std::string& id) const {
  auto it = surfaces_.find(id);
  if (it == surfaces_.end()) throw ValidationError("unknown surface '" + id + "'");
  return it->second;
}

std::vector<const SurgeryRecord*> Catalog::surgeries_into(const std::string& id) const {
  std::vector<const SurgeryRecord*> out;
  for (const auto& s : surgeries_)
    if (s.target == id) out.push_back(&s);
  return out;
}

std::vector<const SurgeryRecord*> Catalog::surgeries_from(const std::string& id) const {
  std::vector<const SurgeryRecord*> out;
  for (const auto& s : surgeries_)
    if (s.source == id) out.push_back(&s);
  return out;
}

const BlowupRecord* Catalog::blowup_into(const std::string& id) const {
  for (const auto& b : blowups_)
    if (b.target == id) return &b;
  return nullptr;
}

std::vector<std::string> Catalog::equivalent_to(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& e : equivalences_) {
    if (e.a == id) out.push_back(e.b);
    if (e.b == id) out.push_back(e.a);
  }
  return out;
}

json model_to_json(const SurfaceModel& m) {
  auto p = m.parser();
  json j;
  j["id"] = m.id;
  j["description"] = m.description;
  j["basis"] = m.lattice.labels();
  json gram = json::array(), inv = json::array();
  for (std::size_t i = 0; i < m.lattice.rank(); ++i) {
    json g = json::array(), t = json::array();
    for (std::size_t k = 0; k < m.lattice.rank(); ++k) {
      g.push_back(to_long(m.lattice.gram()(i, k)));
      t.push_back(to_long(m.involution.matrix(i, k)));
    }
    gram.push_back(g);
    inv.push_back(t);
  }
  j["gram"] = gram;
  j["involution"] = inv;
  j["c1"] = p.format(m.c1);
  json comps = json::array();
  for (const auto& c : m.components) {
    json cj;
    cj["label"] = c.label;
    cj["topology"] = c.topo.to_string();
    cj["chi"] = c.topo.chi();
    if (c.mod2_class) cj["mod2_class"] = c.mod2_class->to_string();
    if (c.parity_form) cj["parity_form"] = c.parity_form->to_string();
    comps.push_back(cj);
  }
  j["components"] = comps;
  j["euler_char"] = m.euler_char();
  auto fmt = [&](const std::vector<ClassVec>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(p.format(v));
    return a;
  };
  j["anti_invariant_lattice"] = fmt(eigenlattice(m.involution, -1));
  j["invariant_lattice"] = fmt(eigenlattice(m.involution, 1));
  j["twistable"] = fmt(m.twistable);
  j["tags"] = m.tags;
  j["exceptional"] = m.exceptional;
  return j;
}

}  // namespace wsurg
