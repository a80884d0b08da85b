#include "doctest.h"
#include "wsurg/errors.hpp"
#include "wsurg/oracle.hpp"

using namespace wsurg;

TEST_CASE("Kontsevich recursion") {
  const long n[] = {1, 1, 12, 620, 87304};
  for (int d = 1; d <= 5; ++d) CHECK(kontsevich_nd(d) == n[d - 1]);
  CHECK(kontsevich_nd(6) == 26312976);
  CHECK_THROWS_AS(kontsevich_nd(0), ValidationError);
}

TEST_CASE("floor diagrams agree with the recursion") {
  for (int d = 1; d <= 5; ++d) {
    INFO("d = " << d);
    OracleSummary s = oracle_summary(d);
    CHECK(s.complex_total == kontsevich_nd(d));
    CHECK(abs(s.real_total) <= s.complex_total);
    CHECK((s.real_total - s.complex_total) % 2 == 0);
  }
}

TEST_CASE("Welschinger anchors") {
  CHECK(welschinger_s0(1) == 1);
  CHECK(welschinger_s0(2) == 1);
  CHECK(welschinger_s0(3) == 8);
  // values from the literature on real plane curves
  CHECK(welschinger_s0(4) == 240);
  CHECK(welschinger_s0(5) == 18264);
}

TEST_CASE("degree 3 diagrams in detail") {
  auto all = enumerate_diagrams(3);
  REQUIRE(all.size() == 3);
  Integer markings = 0;
  for (const auto& c : all) {
    const auto& g = c.diagram;
    CHECK(g.edges.size() == 2);
    long sinks = 0;
    for (int v = 0; v < g.degree; ++v) {
      CHECK(g.divergence[v] <= 1);
      sinks += g.sinks[v];
    }
    CHECK(sinks == 3);
    markings += c.markings;
  }
  // chain with weights 1,1 (5 markings), chain with weights 1,2 (1), two floors into one (3)
  CHECK(markings == 9);
}

TEST_CASE("diagram structure invariants") {
  for (int d = 1; d <= 5; ++d) {
    for (const auto& c : enumerate_diagrams(d)) {
      const auto& g = c.diagram;
      std::vector<long> out(static_cast<std::size_t>(d), 0), in(static_cast<std::size_t>(d), 0);
      for (const auto& e : g.edges) {
        CHECK(e.weight >= 1);
        out[e.from] += e.weight;
        in[e.to] += e.weight;
      }
      for (int v = 0; v < d; ++v) CHECK(out[v] + g.sinks[v] - in[v] == 1);
      CHECK(c.markings >= 1);
    }
  }
}

TEST_CASE("enumeration is deterministic") {
  auto a = enumerate_diagrams(5), b = enumerate_diagrams(5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].markings == b[i].markings);
    CHECK(a[i].diagram.divergence == b[i].diagram.divergence);
  }
}

TEST_CASE("degree bounds") {
  CHECK_THROWS_AS(enumerate_diagrams(0), ValidationError);
  CHECK_THROWS_AS(enumerate_diagrams(7), ValidationError);
  CHECK_NOTHROW(enumerate_diagrams(2, 2));
}
