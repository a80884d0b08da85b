#include "doctest.h"
#include "wsurg/errors.hpp"
#include "wsurg/recursion.hpp"

using namespace wsurg;
using nlohmann::json;

namespace {

const Catalog& cat() { return Catalog::builtin(); }

const Registry& reg() {
  static const Registry r = Registry::from_json(json::parse(Registry::builtin_text()), cat());
  return r;
}

const SurgeryRecord& surgery(const std::string& source, const std::string& target) {
  for (const auto& r : cat().surgeries())
    if (r.source == source && r.target == target) return r;
  throw std::runtime_error("no surgery " + source + " -> " + target);
}

RelativeKey cubic_rel(const std::string& d, bool with_u = true, long s = 0) {
  const auto& x = cat().surface("cubic-X");
  RelativeKey k;
  k.base = InvariantKey("cubic-X", {"RP2"}, FSpec::zero(), x.parser().parse(d), s);
  if (with_u) k.U = {x.parser().parse("S")};
  return k;
}

}  // namespace

TEST_CASE("no spheres: the relative invariant is the absolute one") {
  Engine eng(cat(), reg());
  WValue w = eng.reduce_relative(cubic_rel("2c1", false));
  CHECK(w.value == 78);
  CHECK(w.provenance->rule == "relative_base");
}

TEST_CASE("reduction over one sphere in U") {
  Engine eng(cat(), reg());
  CHECK(eng.cor_reduction(cubic_rel("2c1"), 0).value == 76);
  CHECK(eng.cor_reduction(cubic_rel("4D-E1-E2-E3-E4-E5-E6"), 0).value == 40);
  CHECK(eng.cor_reduction(cubic_rel("2D"), 0).value == 1);
  WValue w = eng.cor_reduction(cubic_rel("2c1"), 0);
  REQUIRE(w.provenance->coefficients.size() >= 2);
  CHECK(w.provenance->coefficients[0] == 1);
  CHECK(w.provenance->coefficients[1] == -2);
  CHECK(replay(*w.provenance));
}

TEST_CASE("the forward relation undoes the reduction") {
  Engine eng(cat(), reg());
  const auto& x = cat().surface("cubic-X");
  ClassVec S = x.parser().parse("S");
  for (long s = 0; s <= 2; ++s)
    for (const char* d : {"2c1", "4D-E1-E2-E3-E4-E5-E6", "2D"}) {
      INFO(d << " s=" << s);
      RelativeKey bare = cubic_rel(d, false, s);
      CHECK(eng.relations1_forward(bare, S).value == eng.reduce_relative(bare).value);
    }
}

TEST_CASE("relations through the surgery reproduce the surgery formula") {
  Engine eng(cat(), reg());
  const auto& rec = surgery("cubic-X", "cubic-Y");
  const auto& y = cat().surface("cubic-Y");
  for (long s = 0; s <= 2; ++s) {
    WValue rel = eng.relations1_surgery(cubic_rel("2c1", true, s), 0, rec);
    WValue direct = eng.compute(InvariantKey("cubic-Y", {"RP2"}, FSpec::zero(), y.parser().parse("2c1"), s));
    CHECK(rel.value == direct.value);
    CHECK(replay(*rel.provenance));
  }
}

TEST_CASE("a sphere in V with a real circle") {
  Engine eng(cat(), reg());
  const auto& rec = surgery("Y1", "Y2@Y1");
  const auto& x = cat().surface("Y1");
  const auto& y = cat().surface("Y2@Y1");
  RelativeKey k;
  k.base = InvariantKey("Y1", {"RP2"}, FSpec::complement(y, {"RP2"}), x.parser().parse("2c1"), 0);
  k.V = {rec.sphere.cls};
  CHECK_THROWS_AS(eng.reduce_relative(k), ValidationError);
  k.assert_V_boundary = true;
  WValue w = eng.relations2(k, 0, rec);
  CHECK(w.value == 6);
  CHECK(eng.reduce_relative(k).value == 6);
}

TEST_CASE("relative preconditions") {
  Engine eng(cat(), reg());
  const auto& x = cat().surface("cubic-X");
  RelativeKey k = cubic_rel("2c1");
  SUBCASE("U must hold (-2)-classes") {
    k.U = {x.parser().parse("E1-E2")};
    if (!x.involution.is_anti_invariant(k.U[0])) CHECK_THROWS_AS(eng.reduce_relative(k), ValidationError);
    k.U = {x.parser().parse("D")};
    CHECK_THROWS_AS(eng.reduce_relative(k), ValidationError);
  }
  SUBCASE("negative pairing with a U-sphere gives zero") {
    RelativeKey n = cubic_rel("2D");
    n.base.d = x.parser().parse("2c1") - Integer(3) * x.parser().parse("S");
    CHECK(eng.reduce_relative(n).value == 0);
  }
  SUBCASE("the surgery relation needs the sphere in U") {
    CHECK_THROWS_AS(eng.relations1_surgery(cubic_rel("2c1", false), 0, surgery("cubic-X", "cubic-Y")), ValidationError);
    CHECK_THROWS_AS(eng.relations1_surgery(cubic_rel("2c1"), 0, surgery("Y2", "Y3")), ValidationError);
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(eng.cor_reduction(k, 3), ValidationError);
  }
}
