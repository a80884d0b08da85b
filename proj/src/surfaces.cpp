#include "wsurg/surfaces.hpp"

#include "wsurg/errors.hpp"

#include <algorithm>
#include <set>

namespace wsurg {

long Topology::chi() const {
  switch (kind) {
    case Kind::Sphere: return 2;
    case Kind::RP2k: return 1 - k;
    case Kind::Orientable: return 2 - 2 * k;
  }
  return 0;
}

Topology Topology::with_crosscap() const {
  switch (kind) {
    case Kind::Sphere: return rp2(0);
    case Kind::RP2k: return rp2(k + 1);
    case Kind::Orientable: return rp2(2 * k);  // T^2 # RP^2 = RP^2 # RP^2 # RP^2
  }
  return *this;
}

std::string Topology::to_string() const {
  switch (kind) {
    case Kind::Sphere: return "S2";
    case Kind::RP2k: return k == 0 ? "RP2" : "RP2_" + std::to_string(k);
    case Kind::Orientable: return "genus_" + std::to_string(k);
  }
  return "?";
}

Topology Topology::parse(const std::string& s) {
  try {
    if (s == "S2" || s == "sphere") return sphere();
    if (s == "RP2") return rp2(0);
    if (s.rfind("RP2_", 0) == 0) {
      long k = std::stol(s.substr(4));
      if (k >= 0) return rp2(k);
    }
    if (s.rfind("genus_", 0) == 0) {
      long g = std::stol(s.substr(6));
      if (g >= 0) return orientable(g);
    }
  } catch (const std::logic_error&) {
  }
  throw ValidationError("unknown component topology '" + s + "' (expected S2, RP2, RP2_<k> or genus_<g>)");
}

// ------------------------------------------------------------ SurfaceModel

ClassParser SurfaceModel::parser() const { return ClassParser(lattice, aliases); }

const RealComponent* SurfaceModel::component(const std::string& label) const {
  for (const auto& c : components)
    if (c.label == label) return &c;
  return nullptr;
}

std::vector<std::string> SurfaceModel::component_labels() const {
  std::vector<std::string> out;
  for (const auto& c : components) out.push_back(c.label);
  return out;
}

long SurfaceModel::euler_char() const {
  long chi = 0;
  for (const auto& c : components) chi += c.topo.chi();
  return chi;
}

bool SurfaceModel::is_twistable(const ClassVec& t) const {
  return std::find(twistable.begin(), twistable.end(), t) != twistable.end();
}

void SurfaceModel::validate() const {
  auto fail = [&](const std::string& what) { throw ValidationError("surface '" + id + "': " + what); };
  std::size_t n = lattice.rank();
  if (c1.size() != n) fail("c1 has the wrong dimension");
  try {
    involution.validate(lattice);
  } catch (const ValidationError& e) {
    fail(e.what());
  }
  if (!involution.is_anti_invariant(c1)) fail("c1 is not anti-invariant under the involution");

  std::set<std::string> seen;
  for (const auto& c : components) {
    if (!seen.insert(c.label).second) fail("duplicate component label '" + c.label + "'");
    if (c.mod2_class) {
      if (c.mod2_class->size() != n) fail("mod-2 class of '" + c.label + "' has the wrong dimension");
      ClassVec lift(n);
      for (std::size_t i = 0; i < n; ++i) lift[i] = c.mod2_class->bits[i];
      if (Mod2Class::reduce(involution.apply(lift)) != *c.mod2_class)
        fail("mod-2 class of '" + c.label + "' is not invariant under the involution");
      int self = pair_mod2(lattice, *c.mod2_class, *c.mod2_class);
      if (self != ((c.topo.chi() % 2 + 2) % 2))
        fail("mod-2 class of '" + c.label + "' has self-intersection of the wrong parity for its Euler characteristic");
    }
    if (c.parity_form && c.parity_form->size() != n) fail("parity form of '" + c.label + "' has the wrong dimension");
  }

  // Lefschetz: chi(RX) = 1 + tr(tau on H_2) + 1 for a simply connected surface.
  Integer lefschetz = involution.matrix.trace() + 2;
  if (lefschetz != euler_char())
    fail("Euler characteristic of the real part (" + std::to_string(euler_char()) +
         ") disagrees with the Lefschetz number 2 + tr(T) = " + lefschetz.str());

  for (const auto& t : twistable) {
    if (t.size() != n) fail("twistable class has the wrong dimension");
    if (!involution.is_anti_invariant(t)) fail("twistable class " + t.to_string() + " is not anti-invariant");
  }
  for (const auto& [name, v] : aliases) {
    if (v.size() != n) fail("alias '" + name + "' has the wrong dimension");
    if (lattice.index_of(name) >= 0) fail("alias '" + name + "' shadows a basis label");
  }
}

// ---------------------------------------------------------------- blow-up

namespace {

ClassVec pad(const ClassVec& v, std::size_t n) {
  ClassVec r = v;
  r.coords.resize(n, 0);
  return r;
}

Mod2Class pad(const Mod2Class& v, std::size_t n) {
  Mod2Class r = v;
  r.bits.resize(n, 0);
  return r;
}

}  // namespace

SurfaceModel blowup(const SurfaceModel& model, const std::string& target_id, const std::vector<BlowupPoint>& points,
                    BlowupRecord* record) {
  std::vector<std::string> new_labels;
  for (const auto& p : points) {
    if (p.real && p.labels.size() != 1) throw ValidationError("a real blow-up point needs exactly one label");
    if (!p.real && p.labels.size() != 2) throw ValidationError("a conjugate pair needs exactly two labels");
    if (p.real && !model.component(p.on))
      throw ValidationError("blow-up of '" + model.id + "': unknown real component '" + p.on + "'");
    new_labels.insert(new_labels.end(), p.labels.begin(), p.labels.end());
  }
  for (const auto& l : new_labels)
    if (model.aliases.count(l)) throw ValidationError("exceptional label '" + l + "' collides with an alias");

  SurfaceModel out;
  out.id = target_id;
  out.lattice = model.lattice.extended(new_labels);
  std::size_t n0 = model.lattice.rank(), n = out.lattice.rank();

  IntMatrix t(n, n);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n0; ++j) t(i, j) = model.involution.matrix(i, j);
  out.c1 = pad(model.c1, n);
  for (const auto& p : points) {
    if (p.real) {
      auto e = static_cast<std::size_t>(out.lattice.index_of(p.labels[0]));
      t(e, e) = -1;
      out.c1[e] = -1;
    } else {
      auto a = static_cast<std::size_t>(out.lattice.index_of(p.labels[0]));
      auto b = static_cast<std::size_t>(out.lattice.index_of(p.labels[1]));
      t(b, a) = -1;
      t(a, b) = -1;
      out.c1[a] = -1;
      out.c1[b] = -1;
    }
  }
  out.involution.matrix = std::move(t);

  std::map<std::string, ComponentOrigin> origin;
  for (const auto& c : model.components) {
    RealComponent nc{c.label, c.topo, std::nullopt, std::nullopt};
    if (c.mod2_class) nc.mod2_class = pad(*c.mod2_class, n);
    if (c.parity_form) nc.parity_form = pad(*c.parity_form, n);
    bool touched = false;
    std::optional<std::string> rename;
    for (const auto& p : points) {
      if (!p.real || p.on != c.label) continue;
      touched = true;
      auto e = static_cast<std::size_t>(out.lattice.index_of(p.labels[0]));
      nc.topo = nc.topo.with_crosscap();
      // The new Moebius band meets the exceptional curve in its core circle.
      if (nc.mod2_class) nc.mod2_class->bits[e] ^= 1;
      if (nc.parity_form) nc.parity_form->bits[e] ^= 1;
      if (p.rename) {
        if (rename && *rename != *p.rename) throw ValidationError("conflicting renames for component '" + c.label + "'");
        rename = p.rename;
      }
    }
    if (rename) nc.label = *rename;
    origin[nc.label] = ComponentOrigin{c.label, touched};
    out.components.push_back(std::move(nc));
  }

  for (const auto& [name, v] : model.aliases) out.aliases[name] = pad(v, n);
  out.aliases["c1"] = out.c1;
  out.exceptional = model.exceptional;
  out.exceptional.insert(out.exceptional.end(), new_labels.begin(), new_labels.end());
  out.description = "blow-up of " + model.id;
  out.validate();

  if (record) *record = BlowupRecord{model.id, target_id, points, std::move(origin)};
  return out;
}

// ---------------------------------------------------------------- surgery

SurfaceModel surgery(const SurfaceModel& model, const std::string& target_id, const SphereSpec& sphere,
                     SurgeryRecord* record) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("surgery of '" + model.id + "' along " + model.parser().format(sphere.cls) + ": " + what);
  };
  const auto& lat = model.lattice;
  if (sphere.cls.size() != lat.rank()) fail("sphere class has the wrong dimension");
  if (pair(lat, sphere.cls, sphere.cls) != -2) fail("sphere class does not have square -2");
  if (model.c1_degree(sphere.cls) != 0) fail("sphere class has nonzero c1-degree");
  if (!model.involution.is_anti_invariant(sphere.cls)) fail("sphere class is not anti-invariant");

  SurfaceModel out = model;
  out.id = target_id;
  out.twistable.clear();
  out.tags.clear();
  out.description = "real surgery of " + model.id;
  out.involution.matrix = model.involution.matrix * reflection_matrix(lat, sphere.cls);

  Mod2Class s2 = Mod2Class::reduce(sphere.cls);
  std::map<std::string, ComponentOrigin> origin;
  std::vector<RealComponent> comps;

  if (!sphere.circle_on) {
    if (sphere.pieces.size() != 1) fail("an empty real locus creates exactly one new sphere component");
    for (const auto& c : model.components) {
      comps.push_back(c);
      origin[c.label] = ComponentOrigin{c.label, false};
    }
    // The sphere itself becomes a real component.
    comps.push_back(RealComponent{sphere.pieces[0], Topology::sphere(), s2, Mod2Class(lat.rank())});
    origin[sphere.pieces[0]] = ComponentOrigin{std::nullopt, true};
  } else {
    const RealComponent* cut = model.component(*sphere.circle_on);
    if (!cut) fail("unknown component '" + *sphere.circle_on + "'");
    for (const auto& c : model.components) {
      if (c.label == cut->label) continue;
      comps.push_back(c);
      origin[c.label] = ComponentOrigin{c.label, false};
    }
    const Topology& t = cut->topo;
    if (sphere.pieces.size() == 1) {
      Topology result;
      if (t.kind == Topology::Kind::Sphere) {
        fail("every circle on a sphere separates; name two pieces");
      } else if (t.kind == Topology::Kind::Orientable) {
        result = Topology::orientable(t.k - 1);
      } else {
        long c = t.crosscaps();
        if (c < 2) fail("a two-sided non-separating circle needs at least two cross-caps");
        result = c == 2 ? Topology::sphere() : Topology::rp2(c - 3);
      }
      RealComponent nc{sphere.pieces[0], result, std::nullopt, std::nullopt};
      if (cut->mod2_class) nc.mod2_class = *cut->mod2_class + s2;
      if (result.kind == Topology::Kind::Sphere) nc.parity_form = Mod2Class(lat.rank());
      comps.push_back(std::move(nc));
      origin[sphere.pieces[0]] = ComponentOrigin{cut->label, true};
    } else if (sphere.pieces.size() == 2) {
      std::vector<Topology> tops = sphere.piece_topology;
      if (tops.empty() && t.kind == Topology::Kind::Sphere) tops = {Topology::sphere(), Topology::sphere()};
      if (tops.size() != 2) fail("a separating cut must name the topology of both pieces");
      if (tops[0].chi() + tops[1].chi() != t.chi() + 2)
        fail("pieces of a separating cut must have total Euler characteristic chi + 2");
      for (int i = 0; i < 2; ++i) {
        RealComponent nc{sphere.pieces[i], tops[i], std::nullopt, std::nullopt};
        if (tops[i].kind == Topology::Kind::Sphere) nc.parity_form = Mod2Class(lat.rank());
        comps.push_back(std::move(nc));
        origin[sphere.pieces[i]] = ComponentOrigin{cut->label, true};
      }
    } else {
      fail("a cut produces one or two pieces");
    }
  }
  out.components = std::move(comps);
  if (out.euler_char() != model.euler_char() + 2) fail("Euler characteristic did not grow by 2");
  out.validate();

  if (record) *record = SurgeryRecord{model.id, target_id, sphere, 2, std::move(origin)};
  return out;
}

// ----------------------------------------------------------------- parity

namespace {

std::vector<int> required_parities(const SurfaceModel& model, const std::vector<std::string>& L, const ClassVec& d) {
  std::vector<int> req;
  Mod2Class dm = Mod2Class::reduce(d);
  for (const auto& label : L) {
    const RealComponent* c = model.component(label);
    if (!c) throw ValidationError("unknown component '" + label + "' on surface '" + model.id + "'");
    if (!c->parity_form)
      throw ConfigurationError("insufficient catalog data: component '" + label + "' of '" + model.id +
                               "' carries no parity data");
    int l2 = pair_mod2(model.lattice, dm, *c->parity_form);
    req.push_back((l2 + 1) % 2);
  }
  return req;
}

}  // namespace

bool parity_check(const SurfaceModel& model, const std::vector<std::string>& L, const ClassVec& d,
                  const std::vector<long>& point_counts) {
  if (L.size() <= 1) return true;
  if (point_counts.size() != L.size()) throw ValidationError("parity_check: one point count per component of L");
  auto req = required_parities(model, L, d);
  for (std::size_t i = 0; i < L.size(); ++i)
    if (((point_counts[i] % 2) + 2) % 2 != req[i]) return false;
  return true;
}

bool parity_satisfiable(const SurfaceModel& model, const std::vector<std::string>& L, const ClassVec& d, long r) {
  if (r < 0) return false;
  if (L.size() <= 1) return true;
  auto req = required_parities(model, L, d);
  long odd = std::count(req.begin(), req.end(), 1);
  return r >= odd && (r - odd) % 2 == 0;
}

}  // namespace wsurg
