#include "doctest.h"
#include "wsurg/errors.hpp"
#include "wsurg/recursion.hpp"

#include <random>
#include <thread>

using namespace wsurg;
using nlohmann::json;

namespace {

const Catalog& cat() { return Catalog::builtin(); }

const Registry& reg() {
  static const Registry r = Registry::from_json(json::parse(Registry::builtin_text()), cat());
  return r;
}

InvariantKey key(const std::string& surface, std::vector<std::string> L, FSpec f, const std::string& d, long s) {
  return InvariantKey(surface, std::move(L), std::move(f), cat().surface(surface).parser().parse(d), s);
}

const SurgeryRecord& surgery(const std::string& source, const std::string& target) {
  for (const auto& r : cat().surgeries())
    if (r.source == source && r.target == target) return r;
  throw std::runtime_error("no surgery " + source + " -> " + target);
}

FSpec sphere_class(const std::string& surface, const std::string& expr) {
  return FSpec::of_class(Mod2Class::reduce(cat().surface(surface).parser().parse(expr)));
}

void check_replays(const WValue& w) {
  REQUIRE(w.provenance);
  CHECK(w.provenance->value == w.value);
  CHECK(replay(*w.provenance));
  json j = json::parse(provenance_to_json(*w.provenance).dump());
  CHECK(replay_json(j));
}

}  // namespace

TEST_CASE("u sequence and coefficient conventions") {
  CHECK(u_sequence(0) == 1);
  CHECK(u_sequence(1) == 2);
  CHECK(u_sequence(2) == 3);
  for (long i = 0; i <= 30; ++i) CHECK(u_sequence(i) == i + 1);
  for (long i = 0; i + 2 <= 30; ++i) CHECK(u_sequence(i + 2) == 2 * u_sequence(i + 1) - u_sequence(i));
  for (long m = 0; m <= 8; ++m) CHECK(reduction_coefficient(m, 0) == 1);
  CHECK(reduction_coefficient(0, 1) == -2);
  CHECK(forward_coefficient(1, 1) == 3);
  CHECK(forward_coefficient(0, 0) == 1);
}

TEST_CASE("inverse matrix") {
  for (long m = 0; m <= 8; ++m)
    for (long K = 1; K <= 10; ++K) CHECK(verify_inverse_matrix(m, K));
  CHECK_THROWS_AS(verify_inverse_matrix(-1, 2), ValidationError);
}

TEST_CASE("forward and reduction coefficients invert each other on random tails") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> len(1, 10), mm(0, 8), val(-50, 50);
  for (int t = 0; t < 300; ++t) {
    std::vector<Integer> tail(static_cast<std::size_t>(len(rng)));
    for (auto& x : tail) x = val(rng);
    CHECK(verify_relation_roundtrip(mm(rng), tail));
  }
}

TEST_CASE("cubic surface with two real components") {
  Engine eng(cat(), reg());
  const FSpec zero = FSpec::zero(), s2 = FSpec::of_components({"S2"});
  for (long s = 0; s <= 1; ++s) {
    CHECK(eng.compute(key("cubic-Y", {"RP2"}, zero, "c1", s)).value == 4 - s);
    CHECK(eng.compute(key("cubic-Y", {"RP2"}, s2, "c1", s)).value == -s);
  }
  const long plain[] = {160, 64, 24}, twisted[] = {0, 0, 24};
  for (long s = 0; s <= 2; ++s) {
    WValue a = eng.compute(key("cubic-Y", {"RP2"}, zero, "2c1", s));
    WValue b = eng.compute(key("cubic-Y", {"RP2"}, s2, "2c1", s));
    CHECK(a.value == plain[s]);
    CHECK(b.value == twisted[s]);
    check_replays(a);
    check_replays(b);
  }
  CHECK_THROWS_AS(eng.compute(key("cubic-Y", {"RP2"}, zero, "c1", 2)), ValidationError);
}

TEST_CASE("main1 and main1_twisted called directly") {
  Engine eng(cat(), reg());
  const auto& rec = surgery("cubic-X", "cubic-Y");
  WValue plain = eng.main1(key("cubic-Y", {"RP2"}, FSpec::zero(), "2c1", 0), rec);
  CHECK(plain.value == 160);
  const auto& coefs = plain.provenance->coefficients;
  REQUIRE(coefs.size() >= 3);
  CHECK(coefs[0] == 1);
  for (std::size_t k = 1; k < coefs.size(); ++k) CHECK(coefs[k] == 2);
  WValue tw = eng.main1_twisted(key("cubic-Y", {"RP2"}, FSpec::of_components({"S2"}), "2c1", 0), rec);
  CHECK(tw.value == 0);
  check_replays(tw);
}

TEST_CASE("sign twist") {
  Engine eng(cat(), reg());
  const auto& x = cat().surface("cubic-X");
  ClassVec S = x.parser().parse("S");
  const FSpec fs = sphere_class("cubic-X", "S");
  CHECK(eng.sign_twist(key("cubic-X", {"RP2"}, fs, "D", 0), S).value == -1);
  const long base[] = {40, 16, 0};
  for (long s = 0; s <= 2; ++s)
    CHECK(eng.sign_twist(key("cubic-X", {"RP2"}, fs, "4D-E1-E2-E3-E4-E5-E6", s), S).value == -base[s]);
  // pair(2c1, S) = 0: the sign is +1
  CHECK(eng.sign_twist(key("cubic-X", {"RP2"}, fs, "2c1", 1), S).value == 30);
  // t must be asserted twistable
  CHECK_THROWS_AS(eng.sign_twist(key("cubic-X", {"RP2"}, fs, "D", 0), x.parser().parse("E1-E2")), ValidationError);
}

TEST_CASE("twisted relation is the plain one composed with the sign twist") {
  Engine eng(cat(), reg());
  const auto& x = cat().surface("cubic-X");
  ClassVec S = x.parser().parse("S");
  const FSpec fs = sphere_class("cubic-X", "S");
  for (long s = 0; s <= 2; ++s) {
    Integer twisted = 0;
    const std::vector<std::string> terms = {"2c1", "4D-E1-E2-E3-E4-E5-E6", "2D"};
    for (std::size_t k = 0; k < terms.size(); ++k) {
      Integer c = k == 0 ? 1 : 2;
      twisted += c * eng.sign_twist(key("cubic-X", {"RP2"}, fs, terms[k], s), S).value;
    }
    CHECK(twisted == eng.compute(key("cubic-Y", {"RP2"}, FSpec::of_components({"S2"}), "2c1", s)).value);
  }
}

TEST_CASE("conic bundles against the closed forms") {
  Engine eng(cat(), reg());
  CHECK(eng.compute(key("X2", {"S1"}, FSpec::zero(), "c1+2F", 1)).value == 32);
  for (long n = 2; n <= 5; ++n) {
    const std::string id = "X" + std::to_string(n);
    const auto& m = cat().surface(id);
    for (long b = n - 3; b <= 6; ++b)
      for (long s = 0; s <= b - n + 3; ++s) {
        INFO(id << " b=" << b << " s=" << s);
        ClassVec d = m.c1 + Integer(b) * m.parser().parse("F");
        WValue e = eng.compute(InvariantKey(id, {"S1"}, FSpec::zero(), d, s));
        WValue f = eng.compute(InvariantKey(id, {"S1"}, FSpec::complement(m, {"S1"}), d, s));
        CHECK(e.value == closed_form_conic(n, b, s, ConicR::Empty));
        CHECK(f.value == closed_form_conic(n, b, s, ConicR::Full));
        CHECK(replay(*e.provenance));
        CHECK(replay(*f.provenance));
      }
  }
}

TEST_CASE("degree 1 del Pezzo chain") {
  Engine eng(cat(), reg());
  const std::vector<std::pair<std::string, long>> rows = {{"Y5", 30}, {"Y4", 18},  {"Y3", 10},  {"Y2", 6},
                                                          {"Y1", 6},  {"Y1'", 6}, {"Y1''", 6}};
  for (const auto& [id, want] : rows) {
    const auto& m = cat().surface(id);
    std::string l = m.components.front().label;
    INFO(id << " L=" << l);
    WValue w = eng.compute(InvariantKey(id, {l}, FSpec::complement(m, {l}), m.parser().parse("2c1"), 0));
    CHECK(w.value == want);
    check_replays(w);
  }
}

TEST_CASE("L independence where the chain can decide it") {
  Engine eng(cat(), reg());
  for (const char* id : {"Y2", "Y3", "Y4", "Y5", "Y1", "Y1'"}) {
    const auto& m = cat().surface(id);
    std::set<Integer> values;
    for (const auto& c : m.components) {
      try {
        values.insert(eng.compute(InvariantKey(id, {c.label}, FSpec::complement(m, {c.label}), m.parser().parse("2c1"), 0)).value);
      } catch (const UnknownValue&) {
      }
    }
    INFO(id);
    CHECK(values.size() == 1);
  }
}

TEST_CASE("Euler characteristic lemma") {
  Engine eng(cat(), reg());
  const std::vector<std::pair<std::string, long>> rows = {{"Y1", 0}, {"Y2", -2}, {"Y4", -6}};
  for (const auto& [id, want] : rows) {
    const auto& m = cat().surface(id);
    std::string l = m.components.front().label;
    INFO(id);
    InvariantKey k(id, {l}, FSpec::complement(m, {l}), m.parser().parse("c1+Et1"), 0);
    CHECK(eng.euler_char_lemma(k).value == want);
    CHECK(eng.compute(k).value == want);
  }
  const auto& y = cat().surface("Y2");
  CHECK_THROWS_AS(eng.euler_char_lemma(InvariantKey("Y2", {"RP2"}, FSpec::complement(y, {"RP2"}), y.parser().parse("2c1"), 0)),
                  Error);
}

TEST_CASE("positivity transport through main1") {
  Engine eng(cat(), reg());
  for (const auto& rec : cat().surgeries()) {
    const auto& y = cat().surface(rec.target);
    if (y.components.empty()) continue;
    std::string l = y.components.front().label;
    for (const char* d : {"c1", "2c1"}) {
      WValue w;
      try {
        w = eng.main1(InvariantKey(rec.target, {l}, FSpec::zero(), y.parser().parse(d), 0), rec);
      } catch (const Error&) {
        continue;
      }
      bool nonneg = true;
      for (const auto& c : w.provenance->children) nonneg = nonneg && c->value >= 0;
      if (!nonneg || w.provenance->children.empty()) continue;
      INFO(rec.source << " -> " << rec.target << ", " << d);
      CHECK(w.value >= w.provenance->children.front()->value);
      CHECK(w.provenance->children.front()->value >= 0);
    }
  }
}

TEST_CASE("vanishing policy") {
  SUBCASE("adjunction kills a term and says so") {
    Engine eng(cat(), reg());
    WValue w = eng.compute(key("X2", {"S1"}, FSpec::zero(), "c1+2F", 0));
    bool found = false;
    for (const auto& c : w.provenance->children) found = found || c->rule == "vanishing";
    CHECK(found);
  }
  SUBCASE("a user predicate can zero terms and changes the memo fingerprint") {
    VanishingPolicy p;
    // registry rows come first, so the predicate acts on the blown-up surface
    p.user_predicate = [](const SurfaceModel& m, const InvariantKey&) { return m.id == "X1b"; };
    p.predicate_name = "no X1b";
    CHECK(p.fingerprint() != VanishingPolicy{}.fingerprint());
    Engine eng(cat(), reg(), p);
    CHECK(eng.compute(key("X2", {"S1"}, FSpec::zero(), "c1+2F", 0)).value == 0);
  }
  SUBCASE("the summation cap raises a configuration error") {
    VanishingPolicy p;
    p.max_k = 1;
    Engine eng(cat(), reg(), p);
    CHECK_THROWS_AS(eng.main1(key("cubic-Y", {"RP2"}, FSpec::zero(), "2c1", 0), surgery("cubic-X", "cubic-Y")),
                    ConfigurationError);
  }
}

TEST_CASE("errors") {
  Engine eng(cat(), reg());
  const auto& y3 = cat().surface("Y3");
  CHECK_THROWS_AS(eng.compute(InvariantKey("Y3", {"S3"}, FSpec::complement(y3, {"S3"}), y3.parser().parse("2c1"), 0)),
                  UnknownValue);
  const auto& y = cat().surface("cubic-Y");
  ClassVec not_anti = y.parser().parse("E1");
  if (!y.involution.is_anti_invariant(not_anti))
    CHECK_THROWS_AS(eng.compute(InvariantKey("cubic-Y", {"RP2"}, FSpec::zero(), not_anti, 0)), ValidationError);
  // main1 along a record that does not end on the key's surface
  CHECK_THROWS_AS(eng.main1(key("cubic-Y", {"RP2"}, FSpec::zero(), "2c1", 0), surgery("Y2", "Y3")), Error);
}

TEST_CASE("determinism across engines and threads") {
  auto k = key("Y5", {"RP2"}, FSpec::complement(cat().surface("Y5"), {"RP2"}), "2c1", 0);
  Engine a(cat(), reg()), b(cat(), reg());
  std::string ja = provenance_to_json(*a.compute(k).provenance).dump();
  CHECK(provenance_to_json(*a.compute(k).provenance).dump() == ja);
  CHECK(provenance_to_json(*b.compute(k).provenance).dump() == ja);

  Engine shared(cat(), reg());
  std::vector<std::string> out(8);
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < out.size(); ++i)
    pool.emplace_back([&, i] {
      const char* ids[] = {"Y5", "Y4", "Y3", "Y2"};
      for (const char* id : ids) {
        const auto& m = cat().surface(id);
        shared.compute(InvariantKey(id, {"RP2"}, FSpec::complement(m, {"RP2"}), m.parser().parse("2c1"), 0));
      }
      out[i] = provenance_to_json(*shared.compute(k).provenance).dump();
    });
  for (auto& t : pool) t.join();
  for (const auto& s : out) CHECK(s == ja);
  CHECK(shared.memo_size() > 0);
  shared.clear_memo();
  CHECK(shared.memo_size() == 0);
}
