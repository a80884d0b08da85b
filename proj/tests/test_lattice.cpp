#include "doctest.h"
#include "wsurg/errors.hpp"
#include "wsurg/registry.hpp"

#include <random>

using namespace wsurg;

namespace {

ClassVec random_class(std::mt19937& rng, std::size_t n, long bound = 4) {
  std::uniform_int_distribution<long> u(-bound, bound);
  ClassVec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("binomial conventions") {
  CHECK(binom(5, 2) == 10);
  CHECK(binom(0, 0) == 1);
  CHECK(binom(-1, 0) == 0);
  CHECK(binom(3, 4) == 0);
  CHECK(binom(3, -1) == 0);
  CHECK(binom(60, 30) == Integer("118264581564861424"));
  CHECK(pow2(70) == Integer("1180591620717411303424"));
  CHECK_THROWS_AS(to_long(pow2(80)), Error);
}

TEST_CASE("class expressions parse and format back") {
  const auto& m = Catalog::builtin().surface("cubic-X");
  auto p = m.parser();
  CHECK(p.parse("3D-E1-E2-E3-E4-E5-E6") == m.c1);
  CHECK(p.parse("c1") == m.c1);
  CHECK(p.parse("2(c1-D)") == p.parse("4D-2E1-2E2-2E3-2E4-2E5-2E6"));
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    ClassVec v = random_class(rng, m.lattice.rank());
    CHECK(p.parse(p.format(v)) == v);
  }
}

TEST_CASE("malformed class expressions carry a caret diagnostic") {
  auto p = Catalog::builtin().surface("X2").parser();
  try {
    p.parse("c1+*2F");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find('^') != std::string::npos);
  }
  CHECK_THROWS_AS(p.parse("Q7"), ValidationError);
  CHECK_THROWS_AS(p.parse("(c1"), ValidationError);
}

TEST_CASE("intersection pairing is symmetric and bilinear") {
  const auto& lat = Catalog::builtin().surface("Y5").lattice;
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    ClassVec a = random_class(rng, lat.rank()), b = random_class(rng, lat.rank()), c = random_class(rng, lat.rank());
    CHECK(pair(lat, a, b) == pair(lat, b, a));
    CHECK(pair(lat, a + c, b) == pair(lat, a, b) + pair(lat, c, b));
    CHECK(pair(lat, Integer(3) * a, b) == 3 * pair(lat, a, b));
  }
}

TEST_CASE("reflections in (-2)-classes are involutive isometries") {
  const Catalog& cat = Catalog::builtin();
  std::mt19937 rng(13);
  for (const auto& rec : cat.surgeries()) {
    const auto& lat = cat.surface(rec.source).lattice;
    const ClassVec& s = rec.sphere.cls;
    CHECK(reflect(lat, s, s) == -s);
    IntMatrix r = reflection_matrix(lat, s);
    CHECK(r * r == IntMatrix::identity(lat.rank()));
    CHECK(r.transpose() * lat.gram() * r == lat.gram());
    for (int t = 0; t < 20; ++t) {
      ClassVec a = random_class(rng, lat.rank()), b = random_class(rng, lat.rank());
      CHECK(reflect(lat, reflect(lat, a, s), s) == a);
      CHECK(pair(lat, reflect(lat, a, s), reflect(lat, b, s)) == pair(lat, a, b));
      CHECK(r.apply(a) == reflect(lat, a, s));
    }
  }
}

TEST_CASE("eigenlattices are saturated, complementary in rank, and canonical") {
  for (const auto& id : Catalog::builtin().ids()) {
    const auto& m = Catalog::builtin().surface(id);
    auto minus = eigenlattice(m.involution, -1), plus = eigenlattice(m.involution, +1);
    CHECK(minus.size() + plus.size() == m.lattice.rank());
    for (const auto& v : minus) CHECK(m.involution.apply(v) == -v);
    for (const auto& v : plus) CHECK(m.involution.apply(v) == v);
    CHECK(m.involution.is_anti_invariant(m.c1));
    CHECK(hermite_basis(minus) == minus);
    // 2v in the lattice with v anti-invariant forces v in the lattice
    for (const auto& v : minus) CHECK(lattice_contains(minus, v));
  }
}

TEST_CASE("Hermite basis does not depend on the generating family") {
  std::mt19937 rng(17);
  for (int t = 0; t < 50; ++t) {
    std::vector<ClassVec> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(random_class(rng, 5));
    std::vector<ClassVec> mixed = rows;
    mixed.push_back(rows[0] + rows[1]);
    mixed[1] = mixed[1] + Integer(2) * mixed[0];
    std::reverse(mixed.begin(), mixed.end());
    CHECK(hermite_basis(rows) == hermite_basis(mixed));
    CHECK(same_lattice(rows, mixed));
  }
}

TEST_CASE("integer and mod-2 kernels") {
  std::mt19937 rng(19);
  for (int t = 0; t < 50; ++t) {
    IntMatrix a(2, 5);
    std::uniform_int_distribution<long> u(-3, 3);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 5; ++j) a(i, j) = u(rng);
    for (const auto& v : integer_kernel(a)) CHECK(a.apply(v).is_zero());

    std::vector<Mod2Class> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(Mod2Class::reduce(random_class(rng, 6)));
    auto span = mod2_span(rows);
    auto ker = mod2_kernel(rows, 6);
    CHECK(span.size() + ker.size() == 6);
    for (const auto& k : ker)
      for (const auto& r : rows) {
        int dot = 0;
        for (std::size_t i = 0; i < 6; ++i) dot ^= k.bits[i] & r.bits[i];
        CHECK(dot == 0);
      }
  }
}

TEST_CASE("adjunction defect of lines, conics and exceptional curves") {
  const auto& cp2 = Catalog::builtin().surface("CP2");
  auto d = cp2.parser();
  CHECK(adjunction_defect(cp2.lattice, cp2.c1, d.parse("D"), 0) == 0);
  CHECK(adjunction_defect(cp2.lattice, cp2.c1, d.parse("2D"), 0) == 0);
  CHECK(adjunction_defect(cp2.lattice, cp2.c1, d.parse("3D"), 1) == 0);
  CHECK(adjunction_defect(cp2.lattice, cp2.c1, d.parse("3D"), 0) == 2);
  const auto& x = Catalog::builtin().surface("cubic-X");
  CHECK(adjunction_defect(x.lattice, x.c1, x.parser().parse("E1"), 0) == 0);
  CHECK(adjunction_defect(x.lattice, x.c1, x.parser().parse("2E1"), 0) == -4);
}

TEST_CASE("integer expressions") {
  auto ev = [](const std::string& s, std::map<std::string, Integer> v = {}) { return Expr::parse(s).eval(v); };
  CHECK(ev("2^(2*b+2-s)", {{"b", 2}, {"s", 1}}) == 32);
  CHECK(ev("1+2*3") == 7);
  CHECK(ev("-7 % 3") == 2);
  CHECK(ev("s == 0 ? 78 : s == 1 ? 30 : 22", {{"s", 1}}) == 30);
  CHECK(ev("3 % 2 == 1 && 0 > 1") == 0);
  CHECK(ev("!(1 < 2) || 4 >= 4") == 1);
  CHECK_THROWS_AS(ev("7 / 2"), ValidationError);
  CHECK_THROWS_AS(ev("x + 1"), ValidationError);
  CHECK_THROWS_AS(ev("2^(-1)"), ValidationError);
  CHECK_THROWS_AS(Expr::parse("1 +"), ValidationError);
}
