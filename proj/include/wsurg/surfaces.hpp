#pragma once

// Real surface models (lattice + c1 + involution + real components), the
// blow-up and real-surgery constructors, and the catalog that strings them
// together.

#include "wsurg/lattice.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wsurg {

/// Topological type of a closed connected real component.
struct Topology {
  enum class Kind { Sphere, RP2k, Orientable };
  Kind kind = Kind::Sphere;
  long k = 0;  // blow-up count for RP2k, genus for Orientable

  static Topology sphere() { return {Kind::Sphere, 0}; }
  static Topology rp2(long blowups) { return {Kind::RP2k, blowups}; }
  static Topology orientable(long genus) { return genus == 0 ? sphere() : Topology{Kind::Orientable, genus}; }

  long chi() const;
  /// Number of cross-caps (0 for orientable surfaces).
  long crosscaps() const { return kind == Kind::RP2k ? k + 1 : 0; }
  /// Adds one cross-cap (real blow-up of a point).
  Topology with_crosscap() const;

  std::string to_string() const;  // "S2", "RP2", "RP2_1", "genus_1"
  static Topology parse(const std::string& s);
  friend bool operator==(const Topology&, const Topology&) = default;
};

struct RealComponent {
  std::string label;
  Topology topo;
  /// Class of the component in H_2(X; Z/2), when known.
  std::optional<Mod2Class> mod2_class;
  /// Linear form w with l_{L,d}^2 = d.w mod 2, when known. Spheres have w = 0.
  std::optional<Mod2Class> parity_form;
};

struct SurfaceModel {
  std::string id;
  std::string description;
  IntersectionLattice lattice;
  ClassVec c1;
  InvolutionAction involution;
  std::vector<RealComponent> components;
  /// Classes t for which W_{F+t}(d) = (-1)^{d.t/2} W_F(d) is asserted.
  std::vector<ClassVec> twistable;
  std::map<std::string, ClassVec> aliases;
  std::set<std::string> tags;
  /// Basis labels of exceptional classes (blow-up divisors). Surgery keeps
  /// them: it does not change the underlying symplectic manifold.
  std::vector<std::string> exceptional;

  ClassParser parser() const;
  const RealComponent* component(const std::string& label) const;
  std::vector<std::string> component_labels() const;
  Integer c1_degree(const ClassVec& d) const { return pair(lattice, c1, d); }
  long euler_char() const;
  bool is_twistable(const ClassVec& t) const;
  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

/// Where a component of a constructed surface came from: the source
/// component (absent for a brand new one) and whether its mod-2 class picked
/// up the class of the operation (the sphere of a surgery, the exceptional
/// class of a real blow-up).
struct ComponentOrigin {
  std::optional<std::string> source;
  bool plus_class = false;
};

struct SphereSpec {
  ClassVec cls;
  /// Component carrying the real circle of the sphere; absent when the real
  /// locus of the sphere is empty.
  std::optional<std::string> circle_on;
  /// Labels of the resulting components: one new sphere for an empty locus,
  /// one piece for a non-separating cut, two pieces for a separating cut.
  std::vector<std::string> pieces;
  /// Required for separating cuts of non-spheres: topology of each piece.
  std::vector<Topology> piece_topology;
};

struct SurgeryRecord {
  std::string source;
  std::string target;
  SphereSpec sphere;
  long chi_delta = 2;
  std::map<std::string, ComponentOrigin> origin;  // keyed by target label
};

struct BlowupPoint {
  bool real = false;
  std::string on;                   // component, for real points
  std::vector<std::string> labels;  // 1 label (real) or 2 labels (conjugate pair)
  std::optional<std::string> rename;
};

struct BlowupRecord {
  std::string source;
  std::string target;
  std::vector<BlowupPoint> points;
  std::map<std::string, ComponentOrigin> origin;  // keyed by target label
};

/// Blow-up at real points and/or conjugate pairs.
SurfaceModel blowup(const SurfaceModel& model, const std::string& target_id,
                    const std::vector<BlowupPoint>& points, BlowupRecord* record = nullptr);

/// Real surgery along a real Lagrangian sphere; the result Y satisfies
/// chi(RY) = chi(RX) + 2 and tau_Y = tau_X o r_S.
SurfaceModel surgery(const SurfaceModel& model, const std::string& target_id, const SphereSpec& sphere,
                     SurgeryRecord* record = nullptr);

/// Checks the parity condition |L_i cap x| = l_{L_i,d}^2 + 1 mod 2 for given
/// per-component point counts. Throws ConfigurationError when a component of
/// a multi-component L has no parity data.
bool parity_check(const SurfaceModel& model, const std::vector<std::string>& L, const ClassVec& d,
                  const std::vector<long>& point_counts);

/// Whether some distribution of r real points over L passes parity_check.
bool parity_satisfiable(const SurfaceModel& model, const std::vector<std::string>& L, const ClassVec& d,
                        long r);

/// Two catalog surfaces that are deformation equivalent by an outside
/// classification fact, with identical basis labels.
struct Equivalence {
  std::string a;
  std::string b;
  std::string note;
};

class Catalog {
 public:
  /// Builds every surface from a recipe document, validating as it goes.
  static Catalog from_json(const nlohmann::json& recipe);
  static Catalog load_file(const std::string& path);
  static const Catalog& builtin();
  static const std::string& builtin_recipe_text();

  const SurfaceModel& surface(const std::string& id) const;
  bool has(const std::string& id) const { return surfaces_.count(id) != 0; }
  const std::vector<std::string>& ids() const { return order_; }
  const std::vector<SurgeryRecord>& surgeries() const { return surgeries_; }
  const std::vector<BlowupRecord>& blowups() const { return blowups_; }
  const std::vector<Equivalence>& equivalences() const { return equivalences_; }
  const nlohmann::json& recipe() const { return recipe_; }

  std::vector<const SurgeryRecord*> surgeries_into(const std::string& id) const;
  std::vector<const SurgeryRecord*> surgeries_from(const std::string& id) const;
  const BlowupRecord* blowup_into(const std::string& id) const;
  std::vector<std::string> equivalent_to(const std::string& id) const;

 private:
  std::map<std::string, SurfaceModel> surfaces_;
  std::vector<std::string> order_;
  std::vector<SurgeryRecord> surgeries_;
  std::vector<BlowupRecord> blowups_;
  std::vector<Equivalence> equivalences_;
  nlohmann::json recipe_;
};

/// JSON rendering of a model (lattice, involution, c1, components, eigenlattices).
nlohmann::json model_to_json(const SurfaceModel& model);

}  // namespace wsurg
