// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include "json.hpp"
#include "wsurg/checks.hpp"
#include "wsurg/errors.hpp"
#include "wsurg/oracle.hpp"
#include "wsurg/recursion.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace wsurg;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why << what;
    }
  }
};

const Catalog& cat() { return Catalog::builtin(); }

const Registry& reg() {
  static const Registry r = Registry::from_json(nlohmann::json::parse(Registry::builtin_text()), cat());
  return r;
}

InvariantKey key(const std::string& surface, std::vector<std::string> L, FSpec f, const ClassVec& d, long s) {
  return InvariantKey(surface, std::move(L), std::move(f), d, s);
}

ClassVec cls(const std::string& surface, const std::string& expr) { return cat().surface(surface).parser().parse(expr); }

std::string show(const Integer& v) { return v.str(); }

// Fresh engine per criterion so the timings do not share a memo.
void identities(Outcome& o) {
  for (long m = 0; m <= 8; ++m)
    for (long K = 1; K <= 10; ++K)
      o.require(verify_inverse_matrix(m, K), "inverse matrix fails at m=" + std::to_string(m) + ", K=" + std::to_string(K));
  for (long i = 0; i <= 30; ++i) o.require(u_sequence(i) == i + 1, "u_" + std::to_string(i) + " != " + std::to_string(i + 1));
  std::mt19937 rng(20240229);
  std::uniform_int_distribution<long> len(1, 10), mm(0, 8), val(-1000, 1000);
  for (int t = 0; t < 1000; ++t) {
    long m = mm(rng);
    std::vector<Integer> tail(static_cast<std::size_t>(len(rng)));
    for (auto& x : tail) x = val(rng);
    o.require(verify_relation_roundtrip(m, tail), "round trip fails in trial " + std::to_string(t));
  }
}

void cubic(Outcome& o) {
  Engine eng(cat(), reg());
  const ClassVec c1 = cls("cubic-Y", "c1"), c2 = cls("cubic-Y", "2c1");
  const FSpec zero = FSpec::zero(), sph = FSpec::of_components({"S2"});
  auto eval = [&](const ClassVec& d, const FSpec& f, long s, long want, const std::string& label) {
    WValue w = eng.compute(key("cubic-Y", {"RP2"}, f, d, s));
    o.require(w.value == want, label + " at s=" + std::to_string(s) + ": " + show(w.value) + " != " + std::to_string(want));
    o.require(replay(*w.provenance), label + " provenance does not replay");
  };
  for (long s = 0; s <= 1; ++s) {
    eval(c1, zero, s, 4 - s, "W_0(c1)");
    eval(c1, sph, s, -s, "W_[S](c1)");
  }
  // s = 2 has r = -2 at class c1: not an invariant, so it must be refused
  bool refused = false;
  try {
    eng.compute(key("cubic-Y", {"RP2"}, zero, c1, 2));
  } catch (const ValidationError&) {
    refused = true;
  }
  o.require(refused, "c1 at s=2 (r<0) was not rejected");
  const long plain[] = {160, 64, 24}, twisted[] = {0, 0, 24};
  for (long s = 0; s <= 2; ++s) {
    eval(c2, zero, s, plain[s], "W_0(2c1)");
    eval(c2, sph, s, twisted[s], "W_[S](2c1)");
  }
}

void conic(Outcome& o) {
  Engine eng(cat(), reg());
  for (long n = 2; n <= 5; ++n) {
    const std::string id = "X" + std::to_string(n);
    const auto& m = cat().surface(id);
    for (long b = n - 3; b <= 6; ++b)
      for (long s = 0; s <= b - n + 3; ++s) {
        ClassVec d = m.c1 + Integer(b) * m.parser().parse("F");
        std::string where = id + " b=" + std::to_string(b) + " s=" + std::to_string(s);
        Integer e = eng.compute(key(id, {"S1"}, FSpec::zero(), d, s)).value;
        Integer f = eng.compute(key(id, {"S1"}, FSpec::complement(m, {"S1"}), d, s)).value;
        Integer ce = closed_form_conic(n, b, s, ConicR::Empty), cf = closed_form_conic(n, b, s, ConicR::Full);
        o.require(e == ce, where + " R=empty: " + show(e) + " != " + show(ce));
        o.require(f == cf, where + " R=full: " + show(f) + " != " + show(cf));
      }
  }
}

void delpezzo(Outcome& o) {
  Engine eng(cat(), reg());
  auto w2c1 = [&](const std::string& id, const std::string& l) {
    const auto& m = cat().surface(id);
    return eng.compute(key(id, {l}, FSpec::complement(m, {l}), m.parser().parse("2c1"), 0));
  };
  const std::vector<std::pair<std::string, long>> rows = {{"Y5", 30}, {"Y4", 18},  {"Y3", 10},  {"Y2", 6},
                                                          {"Y1", 6},  {"Y1'", 6}, {"Y1''", 6}};
  for (const auto& [id, want] : rows) {
    const std::string l = cat().surface(id).components.front().label;
    WValue w = w2c1(id, l);
    o.require(w.value == want, id + ": " + show(w.value) + " != " + std::to_string(want));
    o.require(replay(*w.provenance), id + " provenance does not replay");
  }
  // Y2 through both arrows: the surgery formula on the Y2@Y1 and Y2@Y1'' records,
  // for every L the formula admits (L must avoid the surgery sphere).
  for (const auto& rec : cat().surgeries()) {
    if (rec.target != "Y2@Y1" && rec.target != "Y2@Y1''") continue;
    int used = 0;
    for (const auto& c : cat().surface(rec.target).components) {
      auto it = rec.origin.find(c.label);
      if (it == rec.origin.end() || !it->second.source || it->second.plus_class) continue;
      ++used;
      InvariantKey k(rec.target, {c.label}, FSpec::complement(cat().surface(rec.target), {c.label}),
                     cls(rec.target, "2c1"), 0);
      WValue w;
      try {
        w = eng.main1_twisted(k, rec);
      } catch (const Error&) {
        w = eng.main1(k, rec);
      }
      o.require(w.value == 6, "Y2 via the arrow from " + rec.source + " with L=" + c.label + ": " + show(w.value));
    }
    o.require(used > 0, "no admissible L on the arrow from " + rec.source);
  }
  // Y1'' is reached only backwards through its arrow into Y2.
  WValue y1pp = w2c1("Y1''", "RP2");
  bool via_inverse = false;
  std::function<void(const Provenance&)> scan = [&](const Provenance& p) {
    if (p.key.find("Y2@Y1''") != std::string::npos) via_inverse = true;
    for (const auto& ch : p.children) scan(*ch);
  };
  scan(*y1pp.provenance);
  o.require(via_inverse, "Y1'' was not derived through the Y2@Y1'' arrow");
}

void structural(Outcome& o) {
  for (const auto& r : check_catalog(cat())) o.require(r.ok, r.name + ": " + r.detail);
  o.require(!cat().surgeries().empty(), "catalog has no surgeries");
}

void oracle(Outcome& o) {
  const long anchors[] = {1, 1, 8};
  for (int d = 1; d <= 5; ++d) {
    OracleSummary s = oracle_summary(d);
    Integer n = kontsevich_nd(d);
    std::string at = "d=" + std::to_string(d);
    o.require(s.complex_total == n, at + ": floor diagrams " + show(s.complex_total) + " != N_d " + show(n));
    o.require(abs(s.real_total) <= n, at + ": |W| > N");
    o.require((n - s.real_total) % 2 == 0, at + ": parity of W and N differ");
    if (d <= 3) o.require(s.real_total == anchors[d - 1], at + ": W = " + show(s.real_total));
  }
}

void key_validation(Outcome& o) {
  const auto& y = cat().surface("cubic-Y");
  auto rejects = [&](const InvariantKey& k) {
    try {
      validate_key(cat(), k);
    } catch (const ValidationError&) {
      return true;
    }
    return false;
  };
  // genus 1 with c1.d in {0, 2}
  auto basis = eigenlattice(y.involution, -1);
  bool seen0 = false, seen2 = false;
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      ClassVec d = Integer(a) * basis[0] + Integer(b) * basis[1];
      Integer deg = y.c1_degree(d);
      if (deg == 0 || deg == 2) {
        (deg == 0 ? seen0 : seen2) = true;
        o.require(rejects(key("cubic-Y", {"RP2", "S2"}, FSpec::zero(), d, 0)),
                  "g=1 key with c1.d=" + show(deg) + " accepted");
      }
    }
  o.require(seen0 && seen2, "no test classes with c1.d in {0,2}");
  o.require(!rejects(key("cubic-Y", {"RP2", "S2"}, FSpec::zero(), y.c1, 0)), "valid g=1 key rejected");
  // r < 0
  o.require(rejects(key("cubic-Y", {"RP2"}, FSpec::zero(), y.c1, 2)), "r<0 accepted");
  o.require(rejects(key("CP2", {"RP2"}, FSpec::zero(), cls("CP2", "D"), 2)), "r<0 accepted on CP2");
  // parity with parity data present
  o.require(parity_check(y, {"RP2", "S2"}, y.c1, {2, 1}), "admissible distribution refused");
  o.require(!parity_check(y, {"RP2", "S2"}, y.c1, {3, 0}), "parity violation accepted");
  o.require(!parity_satisfiable(y, {"RP2", "S2"}, y.c1, 0), "r=0 passes a parity condition needing an odd count");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Outcome&);
    double limit;  // seconds
  };
  const Criterion all[] = {
      {"identity suite (inverse matrix, u_i, forward o inverse)", identities, 5},
      {"cubic surface table", cubic, 1},
      {"conic bundles vs closed forms", conic, 5},
      {"degree 1 del Pezzo chain", delpezzo, 1},
      {"structural lemmas per surgery", structural, 1},
      {"floor-diagram oracle", oracle, 60},
      {"key validation", key_validation, 1},
  };
  int failed = 0, index = 0;
  for (const auto& c : all) {
    ++index;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.limit, "took longer than " + std::to_string(static_cast<int>(c.limit)) + " s");
    failed += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << index << ": " << c.name << " (" << std::fixed
              << std::setprecision(3) << secs << " s)";
    if (!o.ok) std::cout << " -- " << o.why.str();
    std::cout << "\n";
  }
  return failed == 0 ? 0 : 1;
}
