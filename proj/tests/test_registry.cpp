#include "doctest.h"
#include "wsurg/errors.hpp"
#include "wsurg/oracle.hpp"
#include "wsurg/registry.hpp"

using namespace wsurg;
using nlohmann::json;

namespace {

const Catalog& cat() { return Catalog::builtin(); }

Registry builtin_registry() { return Registry::from_json(json::parse(Registry::builtin_text()), cat()); }

std::optional<Integer> look(const Registry& r, const std::string& surface, std::vector<std::string> L, FSpec f,
                            const ClassVec& d, long s) {
  auto hit = r.lookup(cat(), InvariantKey(surface, std::move(L), std::move(f), d, s));
  if (!hit) return std::nullopt;
  CHECK_FALSE(hit->entry->citation.empty());
  return hit->value;
}

std::optional<Integer> look(const Registry& r, const std::string& surface, std::vector<std::string> L, FSpec f,
                            const std::string& d, long s) {
  return look(r, surface, std::move(L), std::move(f), cat().surface(surface).parser().parse(d), s);
}

json one_entry() {
  return json::parse(R"([{"surface": "CP2", "L": ["RP2"], "F": "zero", "class": "D", "s_max": "1",
                          "value": "1", "citation": "test"}])");
}

}  // namespace

TEST_CASE("built-in registry rows") {
  Registry r = builtin_registry();
  CHECK(look(r, "CP2", {"RP2"}, FSpec::zero(), "D", 0) == Integer(1));
  CHECK(look(r, "CP2", {"RP2"}, FSpec::zero(), "3D", 3) == Integer(2));
  CHECK(look(r, "cubic-X", {"RP2"}, FSpec::zero(), "2c1", 0) == Integer(78));
  CHECK(look(r, "cubic-X", {"RP2"}, FSpec::zero(), "2c1", 1) == Integer(30));
  CHECK(look(r, "cubic-X", {"RP2"}, FSpec::zero(), "2c1", 2) == Integer(22));
  CHECK(look(r, "cubic-X", {"RP2"}, FSpec::zero(), "4D-E1-E2-E3-E4-E5-E6", 1) == Integer(16));
  CHECK(look(r, "X1", {"S1"}, FSpec::zero(), "c1+3F", 1) == pow2(7));
  CHECK_FALSE(look(r, "cubic-X", {"RP2"}, FSpec::zero(), "c1", 0).has_value());
}

TEST_CASE("registry agrees with the closed forms it encodes") {
  Registry r = builtin_registry();
  for (long b = -1; b <= 6; ++b)
    for (long s = 0; s <= b + 1; ++s) {
      INFO("b = " << b << ", s = " << s);
      const auto& m = cat().surface("X1");
      auto v = look(r, "X1", {"S1"}, FSpec::zero(), m.c1 + Integer(b) * m.parser().parse("F"), s);
      if (v) CHECK(*v == closed_form_conic(1, b, s, ConicR::Empty));
    }
}

TEST_CASE("registry cross-check against the floor-diagram oracle") {
  Registry r = builtin_registry();
  CHECK(look(r, "CP2", {"RP2"}, FSpec::zero(), "D", 0) == welschinger_s0(1));
}

TEST_CASE("registry load rejects bad entries") {
  json doc = one_entry();
  CHECK_NOTHROW(Registry::from_json(doc, cat()));

  SUBCASE("missing citation") {
    doc[0].erase("citation");
    CHECK_THROWS_AS(Registry::from_json(doc, cat()), ValidationError);
  }
  SUBCASE("unknown surface") {
    doc[0]["surface"] = "nowhere";
    CHECK_THROWS_AS(Registry::from_json(doc, cat()), ValidationError);
  }
  SUBCASE("unknown component") {
    doc[0]["L"] = json::array({"S9"});
    CHECK_THROWS_AS(Registry::from_json(doc, cat()), ValidationError);
  }
  SUBCASE("non-integer value on the grid") {
    doc[0]["value"] = "(s+1)/2";
    CHECK_THROWS_AS(Registry::from_json(doc, cat()), ValidationError);
  }
  SUBCASE("overlapping entries that disagree") {
    json other = doc[0];
    other["value"] = "2";
    doc.push_back(other);
    CHECK_THROWS_AS(Registry::from_json(doc, cat()), ValidationError);
  }
  SUBCASE("overlapping entries that agree are accepted") {
    doc.push_back(doc[0]);
    CHECK_NOTHROW(Registry::from_json(doc, cat()));
  }
  SUBCASE("unreadable file") {
    CHECK_THROWS_AS(Registry::load_file("/nonexistent/registry.json", cat()), ConfigurationError);
  }
}

TEST_CASE("closed forms for the conic bundles") {
  for (long n = 2; n <= 5; ++n)
    for (long b = n - 3; b <= 6; ++b) {
      long top = b - n + 3;
      for (long s = 0; s <= top; ++s) {
        CHECK(closed_form_conic(n, b, s, ConicR::Empty) == pow2(2 * b + 2 - s));
        Integer full = s == top ? Integer(sign_pow(b + 1)) * pow2(b + n - 1) : Integer(0);
        CHECK(closed_form_conic(n, b, s, ConicR::Full) == full);
      }
      CHECK_THROWS_AS(closed_form_conic(n, b, top + 1, ConicR::Empty), ValidationError);
    }
}
