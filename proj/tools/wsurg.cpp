// Command-line front end: catalog inspection, single invariants with traces,
// reproduction tables, identity checks and the floor-diagram oracle.

#include "CLI11.hpp"
#include "json.hpp"
#include "wsurg/checks.hpp"
#include "wsurg/errors.hpp"
#include "wsurg/oracle.hpp"
#include "wsurg/recursion.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace wsurg;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string catalog_path;
  std::string registry_path;
  std::string format = "table";
  long max_k = 64;
  bool no_adjunction = false;
  bool no_exceptional = false;

  bool json() const { return format == "json"; }
};

struct Session {
  Catalog catalog;
  Registry registry;
  std::unique_ptr<Engine> engine;
};

Session open_session(const RunConfig& cfg) {
  Session s;
  std::string cat_path = cfg.catalog_path;
  if (cat_path.empty())
    if (const char* env = std::getenv("WSURG_CATALOG")) cat_path = env;
  s.catalog = cat_path.empty() ? Catalog::builtin() : Catalog::load_file(cat_path);
  s.registry = cfg.registry_path.empty()
                   ? Registry::from_json(nlohmann::json::parse(Registry::builtin_text()), s.catalog)
                   : Registry::load_file(cfg.registry_path, s.catalog);
  VanishingPolicy policy;
  policy.max_k = cfg.max_k;
  policy.use_adjunction = !cfg.no_adjunction;
  policy.use_exceptional = !cfg.no_exceptional;
  s.engine = std::make_unique<Engine>(s.catalog, s.registry, policy);
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

FSpec parse_f(const SurfaceModel& m, const std::vector<std::string>& L, const std::string& text) {
  if (text.empty() || text == "zero") return FSpec::zero();
  if (text == "complement") return FSpec::complement(m, L);
  if (text.rfind("class:", 0) == 0) return FSpec::of_class(Mod2Class::reduce(m.parser().parse(text.substr(6))));
  auto labels = split(text, ',');
  return FSpec::of_components({labels.begin(), labels.end()});
}

void collect_citations(const Provenance& p, std::set<std::string>& out) {
  if (!p.citation.empty()) out.insert(p.citation);
  for (const auto& c : p.children) collect_citations(*c, out);
}

// Surfaces met on the way down, in first-visit order.
void collect_surfaces(const Provenance& p, std::vector<std::string>& out) {
  auto semi = p.key.find('[');
  auto end = p.key.find(';');
  if (semi != std::string::npos && end != std::string::npos && end > semi) {
    std::string id = p.key.substr(semi + 1, end - semi - 1);
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  for (const auto& c : p.children) collect_surfaces(*c, out);
}

// ---- catalog ---------------------------------------------------------------

int cmd_catalog_list(const RunConfig& cfg) {
  Session s = open_session(cfg);
  if (cfg.json()) {
    ordered_json out = ordered_json::array();
    for (const auto& id : s.catalog.ids()) {
      const auto& m = s.catalog.surface(id);
      ordered_json comps = ordered_json::array();
      for (const auto& c : m.components) comps.push_back({{"label", c.label}, {"topology", c.topo.to_string()}});
      out.push_back({{"id", id},
                     {"rank", m.lattice.rank()},
                     {"euler_char", m.euler_char()},
                     {"components", comps},
                     {"description", m.description}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << std::left << std::setw(26) << "id" << std::setw(6) << "rank" << std::setw(6) << "chi"
            << "real part\n";
  for (const auto& id : s.catalog.ids()) {
    const auto& m = s.catalog.surface(id);
    std::vector<std::string> parts;
    for (const auto& c : m.components) parts.push_back(c.label + ":" + c.topo.to_string());
    std::cout << std::setw(26) << id << std::setw(6) << m.lattice.rank() << std::setw(6) << m.euler_char()
              << join(parts, " + ") << "\n";
  }
  std::cout << "\nsurgeries (source -> target, sphere):\n";
  for (const auto& r : s.catalog.surgeries())
    std::cout << "  " << r.source << " -> " << r.target << "  S = "
              << s.catalog.surface(r.source).parser().format(r.sphere.cls)
              << (r.sphere.circle_on ? "  circle on " + *r.sphere.circle_on : std::string()) << "\n";
  return 0;
}

int cmd_catalog_show(const RunConfig& cfg, const std::string& id) {
  Session s = open_session(cfg);
  const auto& m = s.catalog.surface(id);
  auto j = model_to_json(m);
  if (cfg.json()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << m.id << ": " << m.description << "\n";
  std::cout << "basis: " << join(m.lattice.labels(), ", ") << "\n";
  std::cout << "c1 = " << m.parser().format(m.c1) << "\n";
  for (const auto& c : m.components) std::cout << "component " << c.label << ": " << c.topo.to_string() << "\n";
  std::cout << "chi(RX) = " << m.euler_char() << "\n";
  std::vector<std::string> minus, plus;
  for (const auto& v : eigenlattice(m.involution, -1)) minus.push_back(m.parser().format(v));
  for (const auto& v : eigenlattice(m.involution, +1)) plus.push_back(m.parser().format(v));
  std::cout << "anti-invariant lattice: <" << join(minus, ", ") << ">\n";
  std::cout << "invariant lattice: <" << join(plus, ", ") << ">\n";
  if (!m.tags.empty()) std::cout << "tags: " << join({m.tags.begin(), m.tags.end()}, ", ") << "\n";
  return 0;
}

int cmd_catalog_export(const RunConfig& cfg) {
  Session s = open_session(cfg);
  std::cout << s.catalog.recipe().dump(2) << "\n";
  return 0;
}

// ---- compute ---------------------------------------------------------------

struct ComputeArgs {
  std::string surface;
  std::string cls;
  long s = 0;
  std::string L;
  std::string F = "zero";
  bool trace = false;
  int trace_depth = -1;
};

int cmd_compute(const RunConfig& cfg, const ComputeArgs& a) {
  Session s = open_session(cfg);
  const auto& m = s.catalog.surface(a.surface);
  std::vector<std::string> L = split(a.L, ',');
  if (L.empty()) {
    if (m.components.size() != 1) throw ValidationError("--L is required: " + a.surface + " has several components");
    L.push_back(m.components.front().label);
  }
  InvariantKey key(a.surface, L, parse_f(m, L, a.F), m.parser().parse(a.cls), a.s);
  WValue w = s.engine->compute(key);
  std::set<std::string> cites;
  collect_citations(*w.provenance, cites);
  if (cfg.json()) {
    ordered_json out;
    out["key"] = key.describe(m);
    out["value"] = integer_to_json(w.value);
    out["citations"] = std::vector<std::string>(cites.begin(), cites.end());
    out["provenance"] = provenance_to_json(*w.provenance);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << key.describe(m) << " = " << w.value << "\n";
  if (!cites.empty()) {
    std::cout << "citations:\n";
    for (const auto& c : cites) std::cout << "  " << c << "\n";
  }
  if (a.trace) std::cout << "trace:\n" << render_trace(*w.provenance, a.trace_depth);
  return 0;
}

// ---- reproduce -------------------------------------------------------------

struct Cell {
  std::string row;
  std::string col;
  std::optional<Integer> value;
  std::optional<Integer> expected;
  std::string error;
  ProvenanceP provenance;

  bool ok() const {
    if (!expected) return true;
    return value && *value == *expected;
  }
};

struct Table {
  std::string title;
  std::vector<std::string> rows, cols;
  std::vector<Cell> cells;
  std::vector<std::string> notes;

  void add(Cell c) {
    if (std::find(rows.begin(), rows.end(), c.row) == rows.end()) rows.push_back(c.row);
    if (std::find(cols.begin(), cols.end(), c.col) == cols.end()) cols.push_back(c.col);
    cells.push_back(std::move(c));
  }
  const Cell* find(const std::string& r, const std::string& c) const {
    for (const auto& x : cells)
      if (x.row == r && x.col == c) return &x;
    return nullptr;
  }
  std::size_t mismatches() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return !c.ok(); }));
  }
};

Cell eval_cell(Engine& eng, const InvariantKey& key, std::string row, std::string col,
               std::optional<Integer> expected) {
  Cell c{std::move(row), std::move(col), std::nullopt, std::move(expected), "", nullptr};
  try {
    WValue w = eng.compute(key);
    c.value = w.value;
    c.provenance = w.provenance;
  } catch (const Error& e) {
    c.error = e.what();
  }
  return c;
}

std::string cell_text(const Cell* c) {
  if (!c) return "";
  if (!c->value) return "err";
  std::string t = c->value->str();
  if (!c->ok()) t += " (want " + c->expected->str() + ")";
  return t;
}

void print_table(const Table& t) {
  std::size_t w0 = 4;
  for (const auto& r : t.rows) w0 = std::max(w0, r.size());
  std::size_t w = 8;
  for (const auto& c : t.cells) w = std::max(w, cell_text(&c).size());
  std::cout << t.title << "\n" << std::left << std::setw(static_cast<int>(w0 + 2)) << "";
  for (const auto& c : t.cols) std::cout << std::setw(static_cast<int>(w + 2)) << c;
  std::cout << "\n";
  for (const auto& r : t.rows) {
    std::cout << std::setw(static_cast<int>(w0 + 2)) << r;
    for (const auto& c : t.cols) std::cout << std::setw(static_cast<int>(w + 2)) << cell_text(t.find(r, c));
    std::cout << "\n";
  }
  for (const auto& n : t.notes) std::cout << "note: " << n << "\n";
  for (const auto& c : t.cells)
    if (!c.ok())
      std::cout << "MISMATCH " << c.row << " / " << c.col << ": got "
                << (c.value ? c.value->str() : "error: " + c.error) << ", expected " << c.expected->str() << "\n";
}

ordered_json table_json(const Table& t, bool with_provenance) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : t.cells) {
    ordered_json j;
    j["row"] = c.row;
    j["col"] = c.col;
    j["value"] = c.value ? ordered_json(integer_to_json(*c.value)) : ordered_json(nullptr);
    j["expected"] = c.expected ? ordered_json(integer_to_json(*c.expected)) : ordered_json(nullptr);
    j["ok"] = c.ok();
    if (!c.error.empty()) j["error"] = c.error;
    if (with_provenance && c.provenance) j["provenance"] = provenance_to_json(*c.provenance);
    cells.push_back(j);
  }
  return {{"title", t.title}, {"cells", cells}, {"notes", t.notes}};
}

Table reproduce_cubic(Session& s) {
  Table t;
  t.title = "real cubic surface with real part RP2 + S2, L = RP2 (columns: s)";
  const auto& m = s.catalog.surface("cubic-Y");
  auto key = [&](const std::string& d, FSpec f, long k) { return InvariantKey("cubic-Y", {"RP2"}, f, m.parser().parse(d), k); };
  const FSpec zero = FSpec::zero(), sph = FSpec::of_components({"S2"});
  for (long k = 0; k <= 1; ++k) {
    t.add(eval_cell(*s.engine, key("c1", zero, k), "c1, F = 0", "s=" + std::to_string(k), Integer(4 - k)));
    t.add(eval_cell(*s.engine, key("c1", sph, k), "c1, F = [S2]", "s=" + std::to_string(k), Integer(-k)));
  }
  const long want0[] = {160, 64, 24}, want1[] = {0, 0, 24};
  for (long k = 0; k <= 2; ++k) {
    t.add(eval_cell(*s.engine, key("2c1", zero, k), "2c1, F = 0", "s=" + std::to_string(k), Integer(want0[k])));
    t.add(eval_cell(*s.engine, key("2c1", sph, k), "2c1, F = [S2]", "s=" + std::to_string(k), Integer(want1[k])));
  }
  t.notes.push_back("c1 at s = 2 would need r = -2 real points and is not an invariant");
  return t;
}

Table reproduce_conic(Session& s, long max_n, long max_b) {
  Table t;
  t.title = "conic bundles X_n, L = S1, d = c1 + bF: recursion vs closed form (columns: s)";
  for (long n = 2; n <= max_n; ++n) {
    const std::string id = "X" + std::to_string(n);
    const auto& m = s.catalog.surface(id);
    for (long b = n - 3; b <= max_b; ++b) {
      ClassVec d = m.c1 + Integer(b) * m.parser().parse("F");
      for (long k = 0; k <= b - n + 3; ++k) {
        std::string col = "s=" + std::to_string(k);
        t.add(eval_cell(*s.engine, InvariantKey(id, {"S1"}, FSpec::zero(), d, k),
                        id + " b=" + std::to_string(b) + " R=empty", col, closed_form_conic(n, b, k, ConicR::Empty)));
        t.add(eval_cell(*s.engine, InvariantKey(id, {"S1"}, FSpec::complement(m, {"S1"}), d, k),
                        id + " b=" + std::to_string(b) + " R=full", col, closed_form_conic(n, b, k, ConicR::Full)));
      }
    }
  }
  return t;
}

Table reproduce_delpezzo1(Session& s) {
  Table t;
  t.title = "degree 1 del Pezzo chain, W(2c1, s = 0) with F = [RX - L] (columns: L)";
  const std::vector<std::pair<std::string, long>> rows = {{"Y5", 30}, {"Y4", 18},  {"Y3", 10},  {"Y2", 6},
                                                          {"Y1", 6},  {"Y1'", 6}, {"Y1''", 6}};
  std::size_t unresolved = 0;
  for (const auto& [id, want] : rows) {
    const auto& m = s.catalog.surface(id);
    bool any = false;
    for (const auto& c : m.components) {
      Cell cell = eval_cell(*s.engine, InvariantKey(id, {c.label}, FSpec::complement(m, {c.label}), m.parser().parse("2c1"), 0),
                            id, "L=" + c.label, Integer(want));
      if (!cell.value && cell.error.find("no rule") != std::string::npos) {
        // not derivable from the catalog arrows; reported, not compared
        cell.expected.reset();
        ++unresolved;
      }
      any = any || cell.value.has_value();
      t.add(std::move(cell));
    }
    if (!any) t.add(Cell{id, "any L", std::nullopt, Integer(want), "no component resolved", nullptr});
  }
  if (unresolved)
    t.notes.push_back(std::to_string(unresolved) +
                      " cells with L on a sphere created by a surgery of the chain are not derivable: the surgery formula needs L away from the sphere");
  return t;
}

// Chain plans: one value per step, each checked against an independent route.
Table reproduce_reductions(Session& s) {
  Table t;
  t.title = "reduction chains (columns: step)";
  Engine& eng = *s.engine;
  auto plan_note = [&](const std::string& label, const ProvenanceP& p) {
    if (!p) return;
    std::vector<std::string> surfaces;
    collect_surfaces(*p, surfaces);
    t.notes.push_back(label + ": " + join(surfaces, " -> "));
  };

  // Spheres in a chain of surgeries: X3 down to X1.
  {
    const auto& m = s.catalog.surface("X3");
    InvariantKey k("X3", {"S1"}, FSpec::zero(), m.parser().parse("c1+3F"), 1);
    Cell c = eval_cell(eng, k, "spheres: X3, c1+3F, s=1", "W", closed_form_conic(3, 3, 1, ConicR::Empty));
    plan_note("spheres plan", c.provenance);
    t.add(std::move(c));
  }
  // Two-component degree 1 del Pezzo: Y5 down to Y2 and Y1.
  {
    const auto& m = s.catalog.surface("Y5");
    std::string l = m.components.front().label;
    Cell c = eval_cell(eng, InvariantKey("Y5", {l}, FSpec::complement(m, {l}), m.parser().parse("2c1"), 0),
                       "dp1: Y5, 2c1, L=" + l, "W", Integer(30));
    plan_note("dp1 plan", c.provenance);
    t.add(std::move(c));
  }
  // Relative invariants of the cubic with U = {S}, then the surgery to Y.
  {
    const SurgeryRecord* rec = nullptr;
    for (const auto* r : s.catalog.surgeries_from("cubic-X"))
      if (r->target == "cubic-Y") rec = r;
    if (!rec) throw ConfigurationError("catalog has no surgery cubic-X -> cubic-Y");
    const auto& x = s.catalog.surface("cubic-X");
    auto rel = [&](const std::string& d) {
      RelativeKey k;
      k.base = InvariantKey("cubic-X", {"RP2"}, FSpec::zero(), x.parser().parse(d), 0);
      k.U = {rec->sphere.cls};
      return k;
    };
    const std::vector<std::pair<std::string, long>> steps = {{"2c1", 76}, {"4D-E1-E2-E3-E4-E5-E6", 40}, {"2D", 1}};
    for (const auto& [d, want] : steps) {
      Cell c{"cor: W^{U=S}(" + d + ")", "W", std::nullopt, Integer(want), "", nullptr};
      try {
        WValue w = eng.cor_reduction(rel(d), 0);
        c.value = w.value;
        c.provenance = w.provenance;
      } catch (const Error& e) {
        c.error = e.what();
      }
      t.add(std::move(c));
    }
    InvariantKey yk("cubic-Y", {"RP2"}, FSpec::zero(), s.catalog.surface("cubic-Y").parser().parse("2c1"), 0);
    Cell direct = eval_cell(eng, yk, "cubic-Y 2c1 via the surgery formula", "W", Integer(160));
    Cell c{"cubic-Y 2c1 via relative invariants", "W", std::nullopt, direct.value, "", nullptr};
    try {
      WValue w = eng.relations1_surgery(rel("2c1"), 0, *rec);
      c.value = w.value;
      c.provenance = w.provenance;
    } catch (const Error& e) {
      c.error = e.what();
    }
    t.add(std::move(direct));
    t.add(std::move(c));
  }
  // A sphere in V: the circle surgery of Y1 into Y2.
  {
    const SurgeryRecord* rec = nullptr;
    for (const auto* r : s.catalog.surgeries_from("Y1"))
      if (r->sphere.circle_on) rec = r;
    if (rec) {
      const auto& x = s.catalog.surface("Y1");
      const auto& y = s.catalog.surface(rec->target);
      // L lives on the target; pick a component untouched by the cut.
      std::string l;
      for (const auto& [label, o] : rec->origin)
        if (o.source && *o.source != *rec->sphere.circle_on) l = label;
      if (!l.empty()) {
        RelativeKey k;
        k.base = InvariantKey("Y1", {l}, FSpec::complement(y, {l}), x.parser().parse("2c1"), 0);
        k.V = {rec->sphere.cls};
        k.assert_V_boundary = true;
        InvariantKey yk(rec->target, {l}, FSpec::complement(y, {l}), y.parser().parse("2c1"), 0);
        Cell direct = eval_cell(eng, yk, "V: " + rec->target + ", 2c1, L=" + l, "W", Integer(6));
        Cell c{"V: W^{V=S}_Y1(2c1), L=" + l, "W", std::nullopt, direct.value, "", nullptr};
        try {
          WValue w = eng.relations2(k, 0, *rec);
          c.value = w.value;
          c.provenance = w.provenance;
        } catch (const Error& e) {
          c.error = e.what();
        }
        t.add(std::move(direct));
        t.add(std::move(c));
      }
    }
  }
  return t;
}

int cmd_reproduce(const RunConfig& cfg, const std::string& scenario, long max_n, long max_b, bool trace) {
  Session s = open_session(cfg);
  Table t;
  if (scenario == "cubic") t = reproduce_cubic(s);
  else if (scenario == "conic") t = reproduce_conic(s, max_n, max_b);
  else if (scenario == "delpezzo1") t = reproduce_delpezzo1(s);
  else if (scenario == "reductions") t = reproduce_reductions(s);
  else throw ValidationError("unknown scenario '" + scenario + "' (cubic, conic, delpezzo1, reductions)");

  if (cfg.json()) {
    std::cout << table_json(t, true).dump(2) << "\n";
  } else {
    print_table(t);
    if (trace)
      for (const auto& c : t.cells)
        if (c.provenance) std::cout << "\n" << c.row << " / " << c.col << ":\n" << render_trace(*c.provenance, 4);
  }
  if (std::size_t bad = t.mismatches()) throw VerificationMismatch(std::to_string(bad) + " cell(s) disagree");
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  long max_m = 8;
  long max_K = 10;
  long max_i = 30;
  long trials = 1000;
  unsigned seed = 20240229;
};

int cmd_verify(const RunConfig& cfg, const VerifyArgs& a) {
  std::vector<CheckResult> results;
  {
    CheckResult r{"inverse matrix, m <= " + std::to_string(a.max_m) + ", K <= " + std::to_string(a.max_K), true, ""};
    for (long m = 0; m <= a.max_m && r.ok; ++m)
      for (long K = 1; K <= a.max_K && r.ok; ++K)
        if (!verify_inverse_matrix(m, K)) {
          r.ok = false;
          r.detail = "m = " + std::to_string(m) + ", K = " + std::to_string(K);
        }
    results.push_back(r);
  }
  {
    CheckResult r{"u_i = i + 1, i <= " + std::to_string(a.max_i), true, ""};
    for (long i = 0; i <= a.max_i && r.ok; ++i)
      if (u_sequence(i) != i + 1) {
        r.ok = false;
        r.detail = "u_" + std::to_string(i) + " = " + u_sequence(i).str();
      }
    results.push_back(r);
  }
  {
    CheckResult r{"forward o inverse on " + std::to_string(a.trials) + " random tails", true, ""};
    std::mt19937 rng(a.seed);
    std::uniform_int_distribution<long> len(1, 10), mm(0, a.max_m), val(-1000, 1000);
    for (long t = 0; t < a.trials && r.ok; ++t) {
      long m = mm(rng);
      std::vector<Integer> tail(static_cast<std::size_t>(len(rng)));
      for (auto& x : tail) x = val(rng);
      if (!verify_relation_roundtrip(m, tail)) {
        r.ok = false;
        r.detail = "trial " + std::to_string(t) + ", m = " + std::to_string(m);
      }
    }
    results.push_back(r);
  }
  try {
    Session s = open_session(cfg);
    auto more = check_catalog(s.catalog);
    results.insert(results.end(), more.begin(), more.end());
  } catch (const ValidationError& e) {
    results.push_back({"catalog loads", false, e.what()});
  }

  std::size_t bad = 0;
  for (const auto& r : results) bad += r.ok ? 0 : 1;
  if (cfg.json()) {
    ordered_json out = ordered_json::array();
    for (const auto& r : results) out.push_back({{"check", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      if (!r.ok) std::cout << "FAIL " << r.name << ": " << r.detail << "\n";
    std::cout << results.size() - bad << "/" << results.size() << " checks passed\n";
  }
  if (bad) throw VerificationMismatch(std::to_string(bad) + " check(s) failed");
  return 0;
}

// ---- oracle ----------------------------------------------------------------

int cmd_oracle(const RunConfig& cfg, int degree, int max_degree) {
  int lo = degree > 0 ? degree : 1, hi = degree > 0 ? degree : max_degree;
  ordered_json out = ordered_json::array();
  std::size_t bad = 0;
  for (int d = lo; d <= hi; ++d) {
    OracleSummary s = oracle_summary(d, std::max(hi, kOracleMaxDegree));
    Integer n = kontsevich_nd(d);
    bool ok = s.complex_total == n;
    bad += ok ? 0 : 1;
    if (cfg.json()) {
      out.push_back({{"degree", d},
                     {"complex_total", integer_to_json(s.complex_total)},
                     {"real_total", integer_to_json(s.real_total)},
                     {"diagram_count", s.diagram_count}});
    } else {
      std::cout << "d=" << d << "  diagrams=" << s.diagram_count << "  complex=" << s.complex_total
                << "  real(s=0)=" << s.real_total << "  N_d=" << n << (ok ? "" : "  MISMATCH") << "\n";
    }
  }
  if (cfg.json()) std::cout << (degree > 0 ? out.front() : out).dump(2) << "\n";
  if (bad) throw VerificationMismatch("floor diagrams disagree with the Kontsevich recursion");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Welschinger invariants of real rational surfaces through real surgery"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  RunConfig cfg;
  app.add_option("--catalog", cfg.catalog_path, "catalog recipe (default: $WSURG_CATALOG or built-in)");
  app.add_option("--registry", cfg.registry_path, "registry of base values (default: built-in)");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--max-k", cfg.max_k, "cap on the summation index")->check(CLI::PositiveNumber);
  app.add_flag("--no-adjunction", cfg.no_adjunction, "disable the adjunction filter");
  app.add_flag("--no-exceptional", cfg.no_exceptional, "disable the exceptional-curve filter");

  std::function<int()> run;

  auto* cat = app.add_subcommand("catalog", "inspect the surface catalog");
  cat->require_subcommand(1);
  cat->add_subcommand("list", "list surfaces and surgeries")->callback([&] { run = [&] { return cmd_catalog_list(cfg); }; });
  std::string show_id;
  auto* show = cat->add_subcommand("show", "show one surface");
  show->add_option("id", show_id)->required();
  show->callback([&] { run = [&] { return cmd_catalog_show(cfg, show_id); }; });
  cat->add_subcommand("export", "print the catalog recipe")->callback([&] { run = [&] { return cmd_catalog_export(cfg); }; });

  ComputeArgs ca;
  auto* comp = app.add_subcommand("compute", "compute one invariant");
  comp->add_option("--surface", ca.surface)->required();
  comp->add_option("--class", ca.cls, "class expression, e.g. 2c1 or 3D-E1-E2")->required();
  comp->add_option("--s", ca.s, "number of conjugate pairs");
  comp->add_option("--L", ca.L, "comma-separated components of L");
  comp->add_option("--F", ca.F, "zero | complement | class:<expr> | comma-separated components");
  comp->add_flag("--trace", ca.trace, "print the provenance tree");
  comp->add_option("--trace-depth", ca.trace_depth, "limit the printed tree depth");
  comp->callback([&] { run = [&] { return cmd_compute(cfg, ca); }; });

  std::string scenario;
  long max_n = 5, max_b = 6;
  bool rtrace = false;
  auto* rep = app.add_subcommand("reproduce", "reproduce a table");
  rep->add_option("scenario", scenario, "cubic | conic | delpezzo1 | reductions")
      ->required()
      ->check(CLI::IsMember({"cubic", "conic", "delpezzo1", "reductions"}));
  rep->add_option("--max-n", max_n, "conic: largest n");
  rep->add_option("--max-b", max_b, "conic: largest b");
  rep->add_flag("--trace", rtrace, "print per-cell provenance");
  rep->callback([&] { run = [&] { return cmd_reproduce(cfg, scenario, max_n, max_b, rtrace); }; });

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "exact identity checks and catalog invariants");
  ver->add_option("--max-m", va.max_m)->check(CLI::NonNegativeNumber);
  ver->add_option("--max-K", va.max_K)->check(CLI::PositiveNumber);
  ver->add_option("--max-i", va.max_i)->check(CLI::NonNegativeNumber);
  ver->add_option("--trials", va.trials, "random tails for the relation round trip");
  ver->add_option("--seed", va.seed);
  ver->callback([&] { run = [&] { return cmd_verify(cfg, va); }; });

  int degree = 0, max_degree = 5;
  auto* orc = app.add_subcommand("oracle", "floor-diagram counts for the projective plane");
  orc->add_option("--degree", degree, "a single degree");
  orc->add_option("--max-degree", max_degree, "all degrees up to this one");
  orc->callback([&] { run = [&] { return cmd_oracle(cfg, degree, max_degree); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
