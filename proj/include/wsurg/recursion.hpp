#pragma once

// The formula calculus relating invariants across real surgeries, and the
// memoized driver that strings the formulas together.

#include "wsurg/key.hpp"
#include "wsurg/registry.hpp"

#include "json.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace wsurg {

/// How a value was obtained. Every node satisfies
/// value = sum_i coefficients[i] * children[i]->value, except leaves
/// (registry entries, vanishing, the Euler characteristic lemma).
struct Provenance {
  Integer value;
  std::string rule;
  std::string key;
  std::string citation;
  std::string note;
  std::vector<Integer> coefficients;
  std::vector<std::shared_ptr<const Provenance>> children;
};
using ProvenanceP = std::shared_ptr<const Provenance>;

struct WValue {
  Integer value;
  ProvenanceP provenance;
};

/// A number when it fits in 64 bits, else a decimal string.
nlohmann::json integer_to_json(const Integer& v);
nlohmann::json provenance_to_json(const Provenance& p);
/// Recomputes every combination node from its children; false on any mismatch.
bool replay(const Provenance& p);
bool replay_json(const nlohmann::json& j);
/// Indented text rendering of a provenance tree.
std::string render_trace(const Provenance& p, int max_depth = -1);

struct VanishingPolicy {
  /// A term vanishes when d^2 - c1.d - 2g + 2 < 0 (d not exceptional).
  bool use_adjunction = true;
  /// A term vanishes when d.E < 0 for a catalog exceptional curve E != d.
  bool use_exceptional = true;
  /// Extra effectiveness filter: returning true declares the term zero.
  std::function<bool(const SurfaceModel&, const InvariantKey&)> user_predicate;
  std::string predicate_name;
  /// Hard bound on the summation index of any series.
  long max_k = 64;

  std::string fingerprint() const;
};

/// Invariant relative to spheres U (real locus avoiding L) and V (real
/// circle on the boundary of L or L0). Component labels in L and L0 refer to
/// the surface obtained after surgery along every sphere of V.
struct RelativeKey {
  InvariantKey base;
  std::vector<ClassVec> U;
  std::vector<ClassVec> V;
  std::vector<std::string> L0;
  bool assert_V_boundary = false;
};

/// u_i = sum_{k+2l=i} (-1)^l 2^k binom(k+l, k). Equals i + 1.
Integer u_sequence(long i);

/// Coefficient of W^{U-E}(d - 2kE) in the expression of W^U(d).
Integer reduction_coefficient(long m, long k);
/// Coefficient of W^U(d - 2kE) in the expression of W^{U-E}(d).
Integer forward_coefficient(long m, long k);

/// Checks that M_ij = binom(m+2(j-1), j-i) (1 <= i,j <= K) times the
/// claimed inverse is the identity, exactly.
bool verify_inverse_matrix(long m, long K);

/// Expresses a finite tail of W^{U-E}(d - 2iE) through W^U by the reduction
/// coefficients, maps it back with the forward ones and compares.
bool verify_relation_roundtrip(long m, const std::vector<Integer>& tail);

class Engine {
 public:
  Engine(const Catalog& catalog, const Registry& registry, VanishingPolicy policy = {});

  const Catalog& catalog() const { return *catalog_; }
  const VanishingPolicy& policy() const { return policy_; }

  /// Validates the key, then resolves it by, in order: memo, registry,
  /// vanishing, Euler characteristic lemma, blow-up descent, the surgery
  /// formula (plain or twisted), sign twist, deformation equivalence, and
  /// the surgery formula solved for the source surface. Throws UnknownValue
  /// when nothing applies.
  WValue compute(const InvariantKey& key) const;

  /// W_Y(d) = W_X(d) + 2 sum_k W_X(d - kS), with key on the target Y.
  WValue main1(const InvariantKey& y_key, const SurgeryRecord& surgery) const;
  /// W_Y(d) = W_{X,F'}(d) + 2 sum_k (-1)^k W_{X,F'}(d - kS), F' = F + [S].
  WValue main1_twisted(const InvariantKey& y_key, const SurgeryRecord& surgery) const;
  /// W_F(d) = (-1)^{d.t/2} W_{F+t}(d) for an asserted twistable class t.
  WValue sign_twist(const InvariantKey& key, const ClassVec& t) const;
  /// -chi(RY) + 1 for (c1 + gamma, s = 0, F = [RY - L]) on a degree 1 del Pezzo.
  WValue euler_char_lemma(const InvariantKey& key) const;

  /// Value of a relative invariant, reduced to absolute ones.
  WValue reduce_relative(const RelativeKey& key) const;
  /// W^{U-E,V}(d) = sum_k binom(m+2k, k) W^{U,V}(d - 2kE), m = d.E/2.
  WValue relations1_forward(const RelativeKey& key_without_E, const ClassVec& E) const;
  /// W^{U,V}(d) = sum_k c_k W^{U-E,V}(d - 2kE) with the alternating coefficients.
  WValue cor_reduction(const RelativeKey& key, std::size_t u_index) const;
  /// W^{U-E,V}_Y(d) = sum_k 2^k W^{U,V}_X(d - kE) for the surgery of X along E in U.
  WValue relations1_surgery(const RelativeKey& x_key, std::size_t u_index, const SurgeryRecord& surgery) const;
  /// W^{U,V}_X = W^{U,V-E}_Y for the surgery of X along E in V.
  WValue relations2(const RelativeKey& x_key, std::size_t v_index, const SurgeryRecord& surgery) const;

  std::size_t memo_size() const;
  void clear_memo() const;

 private:
  struct Ctx;
  WValue resolve(const InvariantKey& key, Ctx& ctx) const;
  WValue resolve_uncached(const InvariantKey& key, Ctx& ctx) const;
  std::optional<std::string> vanishing_reason(const SurfaceModel& m, const InvariantKey& key) const;
  bool vanishes_beyond(const SurfaceModel& m, const InvariantKey& key, const ClassVec& dir, long k) const;

  // Plain or twisted, as dictated by how F lifts to the source.
  WValue main1_impl(const InvariantKey& y_key, const SurgeryRecord& surgery, Ctx& ctx) const;
  WValue euler_char_lemma_impl(const InvariantKey& key) const;
  WValue inverse_main1(const InvariantKey& x_key, const SurgeryRecord& surgery, const FSpec& f_y, Ctx& ctx) const;
  WValue series(const std::string& rule, const InvariantKey& head, const ClassVec& dir, long step,
                const std::function<Integer(long)>& coef, const std::function<WValue(const InvariantKey&)>& term,
                const std::string& key_text, long first_k = 0) const;
  WValue reduce_relative_impl(const RelativeKey& key, Ctx& ctx) const;
  WValue sign_twist_impl(const InvariantKey& key, const ClassVec& t, Ctx& ctx) const;
  WValue blowup_descent(const InvariantKey& key, const BlowupRecord& rec, Ctx& ctx) const;
  WValue equivalence(const InvariantKey& key, const std::string& other, Ctx& ctx) const;

  struct Translation {
    std::vector<std::string> L_x;
    FSpec F_x;
    bool odd = false;  // F_Y picks up [S] an odd number of times
  };
  std::optional<Translation> translate_to_source(const InvariantKey& y_key, const SurgeryRecord& s,
                                                 std::string* why) const;

  const Catalog* catalog_;
  const Registry* registry_;
  VanishingPolicy policy_;
  std::string fingerprint_;

  mutable std::shared_mutex memo_mutex_;
  mutable std::map<std::string, WValue> memo_;
  mutable std::map<std::string, std::string> failures_;
};

}  // namespace wsurg
