#include "doctest.h"
#include "wsurg/checks.hpp"
#include "wsurg/errors.hpp"
#include "wsurg/key.hpp"

using namespace wsurg;

namespace {

std::vector<ClassVec> parse_all(const SurfaceModel& m, const std::vector<std::string>& v) {
  std::vector<ClassVec> out;
  for (const auto& s : v) out.push_back(m.parser().parse(s));
  return out;
}

std::multiset<std::string> real_part(const SurfaceModel& m) {
  std::multiset<std::string> out;
  for (const auto& c : m.components) out.insert(c.topo.to_string());
  return out;
}

}  // namespace

TEST_CASE("topology names and Euler characteristics") {
  CHECK(Topology::parse("S2").chi() == 2);
  CHECK(Topology::parse("RP2").chi() == 1);
  CHECK(Topology::parse("RP2_3").chi() == -2);
  CHECK(Topology::parse("genus_1").chi() == 0);
  for (const char* s : {"S2", "RP2", "RP2_1", "RP2_4", "genus_1", "genus_3"})
    CHECK(Topology::parse(s).to_string() == s);
  CHECK(Topology::parse("RP2").with_crosscap().to_string() == "RP2_1");
  CHECK_THROWS_AS(Topology::parse("klein"), ValidationError);
}

TEST_CASE("the built-in catalog validates") {
  const Catalog& cat = Catalog::builtin();
  CHECK(cat.ids().size() >= 20);
  for (const auto& id : cat.ids()) CHECK_NOTHROW(cat.surface(id).validate());
  for (const auto& r : check_catalog(cat)) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.ok);
  }
}

TEST_CASE("degree 1 del Pezzo chain: anti-invariant lattices and real parts") {
  const Catalog& cat = Catalog::builtin();
  struct Row {
    std::string id;
    std::vector<std::string> minus;
    std::multiset<std::string> real;
  };
  const std::vector<Row> rows = {
      {"Y1", {"c1", "Phi", "Et1", "Et2", "Et3"}, {"RP2", "RP2_1"}},
      {"Y1'", {"c1", "Phi", "Et1", "Et2", "Et3"}, {"S2", "RP2_2"}},
      {"Y1''", {"c1", "Phi", "Et1", "Et2+Et3", "Et4+Et5"}, {"RP2"}},
      {"Y2", {"c1", "Phi", "Et1", "Et6+Et7"}, {"RP2", "S2"}},
      {"Y3", {"c1", "Phi", "Et1"}, {"RP2", "S2", "S2"}},
      {"Y4", {"c1", "Et1"}, {"RP2", "S2", "S2", "S2"}},
      {"Y5", {"c1"}, {"RP2", "S2", "S2", "S2", "S2"}},
  };
  for (const auto& r : rows) {
    INFO(r.id);
    const auto& m = cat.surface(r.id);
    CHECK(same_lattice(eigenlattice(m.involution, -1), parse_all(m, r.minus)));
    CHECK(real_part(m) == r.real);
  }
}

TEST_CASE("blow-ups extend the lattice and track the real part") {
  const auto& cp2 = Catalog::builtin().surface("CP2");
  BlowupRecord rec;
  SurfaceModel b = blowup(cp2, "test", {{true, "RP2", {"A"}, std::nullopt}, {false, "", {"B1", "B2"}, std::nullopt}}, &rec);
  CHECK(b.lattice.rank() == 4);
  CHECK(b.euler_char() == cp2.euler_char() - 1);
  CHECK(b.components.front().topo.to_string() == "RP2_1");
  CHECK(b.c1 == b.parser().parse("3D-A-B1-B2"));
  CHECK(b.involution.is_anti_invariant(b.parser().parse("A")));
  CHECK(b.involution.apply(b.parser().parse("B1")) == -b.parser().parse("B2"));
  CHECK(b.exceptional.size() == 3);
  CHECK_NOTHROW(b.validate());
}

TEST_CASE("surgeries change chi by 2 and compose the involution with the reflection") {
  const Catalog& cat = Catalog::builtin();
  for (const auto& rec : cat.surgeries()) {
    const auto& x = cat.surface(rec.source);
    const auto& y = cat.surface(rec.target);
    CHECK(y.euler_char() - x.euler_char() == rec.chi_delta);
    CHECK(y.involution.matrix == x.involution.matrix * reflection_matrix(x.lattice, rec.sphere.cls));
    CHECK(y.involution.is_invariant(rec.sphere.cls));
  }
}

TEST_CASE("surgery rejects classes that are not anti-invariant (-2)-classes") {
  const auto& x = Catalog::builtin().surface("cubic-X");
  SphereSpec bad;
  bad.cls = x.parser().parse("D-E1");
  bad.pieces = {"S"};
  CHECK_THROWS_AS(surgery(x, "bad", bad), ValidationError);
}

TEST_CASE("a corrupted catalog fails with the violated invariant named") {
  nlohmann::json recipe = Catalog::builtin().recipe();
  for (auto& s : recipe["surfaces"])
    if (s["id"] == "X0") s["gram"] = nlohmann::json::parse("[[0,1],[2,0]]");
  try {
    Catalog::from_json(recipe);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("symmetric") != std::string::npos);
  }
}

TEST_CASE("key validation") {
  const Catalog& cat = Catalog::builtin();
  const auto& y = cat.surface("cubic-Y");
  auto key = [&](std::vector<std::string> L, FSpec f, const ClassVec& d, long s) {
    return InvariantKey("cubic-Y", std::move(L), std::move(f), d, s);
  };

  SUBCASE("r < 0 is rejected") {
    CHECK_NOTHROW(validate_key(cat, key({"RP2"}, FSpec::zero(), y.c1, 1)));
    CHECK_THROWS_AS(validate_key(cat, key({"RP2"}, FSpec::zero(), y.c1, 2)), ValidationError);
  }
  SUBCASE("genus 1 excludes c1.d in {0, 2}") {
    // search the anti-invariant lattice for small classes with each c1-degree
    auto basis = eigenlattice(y.involution, -1);
    std::map<long, ClassVec> by_degree;
    for (long a = -2; a <= 2; ++a)
      for (long b = -2; b <= 2; ++b) {
        ClassVec d = Integer(a) * basis[0] + Integer(b) * basis[1];
        long deg = to_long(y.c1_degree(d));
        if (deg >= 0 && deg <= 4 && !by_degree.count(deg)) by_degree[deg] = d;
      }
    REQUIRE(by_degree.count(2));
    CHECK_THROWS_AS(validate_key(cat, key({"RP2", "S2"}, FSpec::zero(), by_degree[2], 0)), ValidationError);
    if (by_degree.count(0))
      CHECK_THROWS_AS(validate_key(cat, key({"RP2", "S2"}, FSpec::zero(), by_degree[0], 0)), ValidationError);
    CHECK_NOTHROW(validate_key(cat, key({"RP2", "S2"}, FSpec::zero(), y.c1, 0)));
  }
  SUBCASE("parity condition on the point distribution") {
    // RP2 needs an even count here (c1.D odd), the sphere an odd one
    CHECK(parity_check(y, {"RP2", "S2"}, y.c1, {2, 1}));
    CHECK(parity_check(y, {"RP2", "S2"}, y.c1, {0, 3}));
    CHECK_FALSE(parity_check(y, {"RP2", "S2"}, y.c1, {3, 0}));
    CHECK_FALSE(parity_check(y, {"RP2", "S2"}, y.c1, {1, 2}));
    CHECK(parity_satisfiable(y, {"RP2", "S2"}, y.c1, 3));
    CHECK_FALSE(parity_satisfiable(y, {"RP2", "S2"}, y.c1, 0));
  }
  SUBCASE("structural rejections") {
    CHECK_THROWS_AS(validate_key(cat, key({"RP2"}, FSpec::of_components({"RP2"}), y.c1, 0)), ValidationError);
    CHECK_THROWS_AS(validate_key(cat, key({"nope"}, FSpec::zero(), y.c1, 0)), ValidationError);
    CHECK_THROWS_AS(validate_key(cat, InvariantKey("nowhere", {"RP2"}, FSpec::zero(), y.c1, 0)), ValidationError);
    ClassVec inv = y.parser().parse("2D-E1-E2-E3-E4-E5-E6");
    if (!y.involution.is_anti_invariant(inv))
      CHECK_THROWS_AS(validate_key(cat, key({"RP2"}, FSpec::zero(), inv, 0)), ValidationError);
  }
  SUBCASE("missing parity data is a configuration error") {
    const auto& m = cat.surface("Y1'");
    std::vector<std::string> L;
    for (const auto& c : m.components) L.push_back(c.label);
    bool missing = false;
    for (const auto& c : m.components) missing = missing || !c.parity_form;
    if (missing) CHECK_THROWS_AS(parity_check(m, L, m.c1, {1, 1}), ConfigurationError);
  }
}

TEST_CASE("canonical key text is insensitive to the order of L") {
  const auto& y = Catalog::builtin().surface("cubic-Y");
  InvariantKey a("cubic-Y", {"RP2", "S2"}, FSpec::zero(), y.c1, 0);
  InvariantKey b("cubic-Y", {"S2", "RP2"}, FSpec::zero(), y.c1, 0);
  CHECK(a.canonical() == b.canonical());
}
