#include "engine_ctx.hpp"

#include "wsurg/errors.hpp"

#include <algorithm>
#include <mutex>

namespace wsurg {

namespace detail {

ProvenanceP leaf(const Integer& value, std::string rule, std::string key, std::string note, std::string citation) {
  auto p = std::make_shared<Provenance>();
  p->value = value;
  p->rule = std::move(rule);
  p->key = std::move(key);
  p->note = std::move(note);
  p->citation = std::move(citation);
  return p;
}

ProvenanceP node(const Integer& value, std::string rule, std::string key, std::string note,
                 std::vector<Integer> coefficients, std::vector<ProvenanceP> children) {
  auto p = std::make_shared<Provenance>();
  p->value = value;
  p->rule = std::move(rule);
  p->key = std::move(key);
  p->note = std::move(note);
  p->coefficients = std::move(coefficients);
  p->children = std::move(children);
  return p;
}

std::string clip(const std::string& s) {
  constexpr std::size_t kMax = 300;
  return s.size() <= kMax ? s : s.substr(0, kMax) + "...";
}

}  // namespace detail

using detail::clip;
using detail::leaf;
using detail::node;

namespace {

constexpr std::size_t kMaxDepth = 200;

InvariantKey shifted(const InvariantKey& head, const ClassVec& v, long k) {
  InvariantKey t = head;
  t.d = head.d - Integer(k) * v;
  return t;
}

// True when d - j v equals some exceptional class for a j >= 0.
bool reaches_exceptional(const SurfaceModel& m, const ClassVec& d, const ClassVec& v) {
  for (const auto& label : m.exceptional) {
    ClassVec diff = d - m.lattice.basis_vector(label);
    if (diff.is_zero()) return true;
    std::size_t i = 0;
    while (i < v.size() && v[i] == 0) ++i;
    if (i == v.size()) continue;
    if (diff[i] % v[i] != 0) continue;
    Integer j = diff[i] / v[i];
    if (j > 0 && j * v == diff) return true;
  }
  return false;
}

}  // namespace

Engine::Engine(const Catalog& catalog, const Registry& registry, VanishingPolicy policy)
    : catalog_(&catalog), registry_(&registry), policy_(std::move(policy)), fingerprint_(policy_.fingerprint()) {
  if (policy_.max_k < 1) throw ConfigurationError("max_k must be positive");
}

std::size_t Engine::memo_size() const {
  std::shared_lock lock(memo_mutex_);
  return memo_.size();
}

void Engine::clear_memo() const {
  std::unique_lock lock(memo_mutex_);
  memo_.clear();
  failures_.clear();
}

WValue Engine::compute(const InvariantKey& key) const {
  validate_key(*catalog_, key);
  Ctx ctx;
  return resolve(key, ctx);
}

WValue Engine::resolve(const InvariantKey& key, Ctx& ctx) const {
  const std::string canon = key.canonical();
  {
    std::shared_lock lock(memo_mutex_);
    if (auto it = memo_.find(canon); it != memo_.end()) return it->second;
    if (auto it = failures_.find(canon); it != failures_.end()) throw UnknownValue(it->second);
  }
  if (auto it = ctx.failed.find(canon); it != ctx.failed.end()) throw UnknownValue(it->second);
  if (ctx.active.count(canon)) {
    ++ctx.cycles;
    throw UnknownValue("cycle back to " + canon);
  }
  if (ctx.stack.size() >= kMaxDepth) {
    ++ctx.cycles;  // not a proof of unknowability either
    throw UnknownValue("recursion depth limit reached at " + canon);
  }
  ctx.stack.push_back(canon);
  ctx.active.insert(canon);
  const std::size_t cycles_before = ctx.cycles;
  auto pop = [&] {
    ctx.active.erase(canon);
    ctx.stack.pop_back();
  };
  try {
    WValue v = resolve_uncached(key, ctx);
    pop();
    std::unique_lock lock(memo_mutex_);
    memo_.emplace(canon, v);
    return v;
  } catch (const UnknownValue& e) {
    pop();
    ctx.failed.emplace(canon, e.what());
    if (ctx.cycles == cycles_before) {
      std::unique_lock lock(memo_mutex_);
      failures_.emplace(canon, e.what());
    }
    throw;
  } catch (...) {
    pop();
    throw;
  }
}

std::optional<std::string> Engine::vanishing_reason(const SurfaceModel& m, const InvariantKey& key) const {
  const auto& lat = m.lattice;
  if (policy_.use_adjunction) {
    bool exceptional = std::any_of(m.exceptional.begin(), m.exceptional.end(),
                                   [&](const std::string& e) { return key.d == lat.basis_vector(e); });
    Integer defect = adjunction_defect(lat, m.c1, key.d, key.genus());
    if (defect < 0 && !exceptional) return "adjunction: d^2 - c1.d - 2g + 2 = " + defect.str();
  }
  if (policy_.use_exceptional) {
    for (const auto& e : m.exceptional) {
      ClassVec ev = lat.basis_vector(e);
      if (key.d == ev) continue;
      Integer de = pair(lat, key.d, ev);
      if (de < 0) return "exceptional positivity: d." + e + " = " + de.str();
    }
  }
  if (policy_.user_predicate && policy_.user_predicate(m, key))
    return "predicate " + (policy_.predicate_name.empty() ? std::string("(user)") : policy_.predicate_name);
  return std::nullopt;
}

bool Engine::vanishes_beyond(const SurfaceModel& m, const InvariantKey& key, const ClassVec& v, long) const {
  const auto& lat = m.lattice;
  if (reaches_exceptional(m, key.d, v)) return false;
  if (policy_.use_adjunction) {
    Integer defect = adjunction_defect(lat, m.c1, key.d, key.genus());
    Integer vv = pair(lat, v, v);
    Integer first_step = -(2 * pair(lat, key.d, v) - pair(lat, m.c1, v)) + vv;
    if (defect < 0 && vv <= 0 && first_step <= 0) return true;
  }
  if (policy_.use_exceptional) {
    for (const auto& e : m.exceptional) {
      ClassVec ev = lat.basis_vector(e);
      if (pair(lat, key.d, ev) < 0 && pair(lat, v, ev) >= 0) return true;
    }
  }
  return false;
}

WValue Engine::series(const std::string& rule, const InvariantKey& head, const ClassVec& dir, long step,
                      const std::function<Integer(long)>& coef,
                      const std::function<WValue(const InvariantKey&)>& term, const std::string& key_text,
                      long first_k) const {
  const SurfaceModel& m = catalog_->surface(head.surface);
  const ClassVec v = Integer(step) * dir;
  std::vector<Integer> coefs;
  std::vector<ProvenanceP> children;
  Integer total = 0;
  for (long k = first_k;; ++k) {
    if (k > policy_.max_k)
      throw ConfigurationError(rule + ": the series along " + m.parser().format(dir) + " for " + key_text +
                               " is not terminated by the vanishing policy within max_k = " +
                               std::to_string(policy_.max_k) + " terms");
    InvariantKey tk = shifted(head, v, k);
    Integer c = coef(k);
    if (auto why = vanishing_reason(m, tk)) {
      if (c != 0) {
        coefs.push_back(c);
        children.push_back(leaf(0, "vanishing", tk.describe(m), *why));
      }
      if (vanishes_beyond(m, tk, v, k)) break;
      continue;
    }
    if (c == 0) continue;
    WValue w = term(tk);
    total += c * w.value;
    coefs.push_back(c);
    children.push_back(w.provenance);
  }
  return {total, node(total, rule, key_text, "", std::move(coefs), std::move(children))};
}

WValue Engine::resolve_uncached(const InvariantKey& key, Ctx& ctx) const {
  const SurfaceModel& m = catalog_->surface(key.surface);
  const std::string desc = key.describe(m);
  try {
    validate_key(*catalog_, key);
  } catch (const ValidationError& e) {
    throw UnknownValue(std::string("undefined term: ") + e.what());
  }

  if (auto hit = registry_->lookup(*catalog_, key))
    return {hit->value, leaf(hit->value, "registry", desc, hit->entry->quote, hit->entry->citation)};
  if (auto why = vanishing_reason(m, key)) return {0, leaf(0, "vanishing", desc, *why)};

  std::vector<std::string> reasons;
  auto attempt = [&](const std::string& what, const std::function<WValue()>& fn) -> std::optional<WValue> {
    try {
      return fn();
    } catch (const UnknownValue& e) {
      reasons.push_back(what + ": " + clip(e.what()));
    } catch (const ValidationError& e) {
      reasons.push_back(what + ": " + clip(e.what()));
    }
    return std::nullopt;
  };

  if (m.tags.count("del_pezzo_1"))
    if (auto v = attempt("euler characteristic lemma", [&] { return euler_char_lemma_impl(key); })) return *v;
  if (const BlowupRecord* rec = catalog_->blowup_into(key.surface))
    if (auto v = attempt("blow-down to " + rec->source, [&] { return blowup_descent(key, *rec, ctx); })) return *v;
  for (const SurgeryRecord* rec : catalog_->surgeries_into(key.surface))
    if (auto v = attempt("surgery from " + rec->source, [&] { return main1_impl(key, *rec, ctx); })) return *v;
  if (m.components.size() <= 16)
    for (const ClassVec& t : m.twistable)
      if (auto v = attempt("sign twist by " + m.parser().format(t), [&] { return sign_twist_impl(key, t, ctx); }))
        return *v;
  for (const std::string& other : catalog_->equivalent_to(key.surface))
    if (auto v = attempt("deformation to " + other, [&] { return equivalence(key, other, ctx); })) return *v;
  for (const SurgeryRecord* rec : catalog_->surgeries_from(key.surface)) {
    const SurfaceModel& y = catalog_->surface(rec->target);
    std::set<std::string> lifted, fresh;
    for (const auto& [label, o] : rec->origin) {
      if (!o.source) fresh.insert(label);
      else if (key.F.components.count(*o.source)) lifted.insert(label);
    }
    std::vector<FSpec> candidates{FSpec{lifted, key.F.extra}};
    if (!fresh.empty()) {
      std::set<std::string> with = lifted;
      with.insert(fresh.begin(), fresh.end());
      candidates.push_back(FSpec{with, key.F.extra});
    }
    for (const FSpec& fy : candidates)
      if (auto v = attempt("inverse surgery to " + y.id + " with F = " + fy.to_string(),
                           [&] { return inverse_main1(key, *rec, fy, ctx); }))
        return *v;
  }

  std::string msg = "no rule determines " + desc;
  if (!reasons.empty()) {
    msg += " (";
    for (std::size_t i = 0; i < reasons.size(); ++i) msg += (i ? "; " : "") + reasons[i];
    msg += ")";
  }
  throw UnknownValue(msg);
}

// ----------------------------------------------------------- surgery formula

std::optional<Engine::Translation> Engine::translate_to_source(const InvariantKey& y_key, const SurgeryRecord& rec,
                                                               std::string* why) const {
  const SurfaceModel& x = catalog_->surface(rec.source);
  const SurfaceModel& y = catalog_->surface(rec.target);
  auto fail = [&](const std::string& w) -> std::optional<Translation> {
    if (why) *why = w;
    return std::nullopt;
  };
  Translation tr;
  for (const auto& l : y_key.L) {
    auto it = rec.origin.find(l);
    if (it == rec.origin.end() || !it->second.source || it->second.plus_class)
      return fail("L component '" + l + "' meets the surgery sphere");
    tr.L_x.push_back(*it->second.source);
  }
  std::map<std::string, std::size_t> cut_pieces;
  for (const auto& c : y_key.F.components) {
    const ComponentOrigin& o = rec.origin.at(c);
    if (!o.source) tr.odd = !tr.odd;
    else if (!o.plus_class) tr.F_x.components.insert(*o.source);
    else ++cut_pieces[*o.source];
  }
  for (const auto& [src, count] : cut_pieces) {
    std::size_t all = 0;
    for (const auto& [label, o] : rec.origin)
      if (o.source == src && o.plus_class) ++all;
    if (count != all) return fail("F contains only part of the cut component '" + src + "'");
    tr.F_x.components.insert(src);
    tr.odd = !tr.odd;
  }
  tr.F_x.extra = y_key.F.extra;

  const Mod2Class s2 = Mod2Class::reduce(rec.sphere.cls);
  auto fy = y_key.F.lower(y);
  if (!fy) return fail("F has no known mod-2 class on " + y.id);
  if (pair_mod2(y.lattice, *fy, s2) != 0) return fail("F is not normal to the sphere class");
  if (auto fx = tr.F_x.lower(x)) {
    Mod2Class expect = *fx;
    if (tr.odd) expect += s2;
    if (!(expect == *fy))
      throw ConfigurationError("catalog inconsistency: F on " + y.id + " and its lift to " + x.id +
                               " have different mod-2 classes");
  }
  return tr;
}

WValue Engine::main1_impl(const InvariantKey& y_key, const SurgeryRecord& rec, Ctx& ctx) const {
  const SurfaceModel& x = catalog_->surface(rec.source);
  const SurfaceModel& y = catalog_->surface(rec.target);
  const ClassVec& S = rec.sphere.cls;
  std::string why;
  auto tr = translate_to_source(y_key, rec, &why);
  if (!tr) throw UnknownValue(why);
  if (tr->odd && !x.is_twistable(S))
    throw UnknownValue("F picks up the sphere class, which is not asserted twistable on " + x.id);
  if (pair(y.lattice, y_key.d, S) != 0)
    throw ConfigurationError("d.S != 0 for an anti-invariant d on " + y.id + ": catalog inconsistency");

  InvariantKey head(x.id, tr->L_x, tr->F_x, y_key.d, y_key.s);
  const bool odd = tr->odd;
  auto coef = [odd](long k) -> Integer { return k == 0 ? Integer(1) : Integer(2 * (odd ? sign_pow(k) : 1)); };
  WValue w = series(odd ? "main1_twisted" : "main1", head, S, 1, coef,
                    [&](const InvariantKey& tk) { return resolve(tk, ctx); }, y_key.describe(y));
  auto p = std::make_shared<Provenance>(*w.provenance);
  p->note = "surgery of " + x.id + " along " + x.parser().format(S);
  return {w.value, p};
}

WValue Engine::main1(const InvariantKey& y_key, const SurgeryRecord& surgery) const {
  validate_key(*catalog_, y_key);
  std::string why;
  auto tr = translate_to_source(y_key, surgery, &why);
  if (!tr) throw ValidationError("surgery formula does not apply: " + why);
  if (tr->odd) throw ValidationError("F picks up the sphere class an odd number of times; use the twisted form");
  Ctx ctx;
  return main1_impl(y_key, surgery, ctx);
}

WValue Engine::main1_twisted(const InvariantKey& y_key, const SurgeryRecord& surgery) const {
  validate_key(*catalog_, y_key);
  std::string why;
  auto tr = translate_to_source(y_key, surgery, &why);
  if (!tr) throw ValidationError("surgery formula does not apply: " + why);
  if (!tr->odd) throw ValidationError("F picks up the sphere class an even number of times; use the plain form");
  Ctx ctx;
  return main1_impl(y_key, surgery, ctx);
}

WValue Engine::inverse_main1(const InvariantKey& x_key, const SurgeryRecord& rec, const FSpec& f_y, Ctx& ctx) const {
  const SurfaceModel& x = catalog_->surface(rec.source);
  const SurfaceModel& y = catalog_->surface(rec.target);
  const ClassVec& S = rec.sphere.cls;
  std::vector<std::string> L_y;
  for (const auto& l : x_key.L) {
    auto it = std::find_if(rec.origin.begin(), rec.origin.end(),
                           [&](const auto& kv) { return kv.second.source == l && !kv.second.plus_class; });
    if (it == rec.origin.end()) throw UnknownValue("L component '" + l + "' meets the surgery sphere");
    L_y.push_back(it->first);
  }
  if (pair(x.lattice, x_key.d, S) != 0) throw UnknownValue("d.S != 0, so d is not anti-invariant on " + y.id);
  InvariantKey y_key(y.id, L_y, f_y, x_key.d, x_key.s);
  std::string why;
  auto tr = translate_to_source(y_key, rec, &why);
  if (!tr) throw UnknownValue(why);
  InvariantKey back(x.id, tr->L_x, tr->F_x, x_key.d, x_key.s);
  if (back.canonical() != x_key.canonical()) throw UnknownValue("F does not lift back to the requested F");
  if (tr->odd && !x.is_twistable(S))
    throw UnknownValue("F picks up the sphere class, which is not asserted twistable on " + x.id);

  WValue wy = resolve(y_key, ctx);
  const bool odd = tr->odd;
  auto coef = [odd](long k) -> Integer { return Integer(2 * (odd ? sign_pow(k) : 1)); };
  WValue tail = series(odd ? "main1_twisted_tail" : "main1_tail", x_key, S, 1, coef,
                       [&](const InvariantKey& tk) { return resolve(tk, ctx); },
                       "tail of the surgery formula for " + x_key.describe(x), 1);
  Integer value = wy.value - tail.value;
  return {value, node(value, "inverse_main1", x_key.describe(x), "surgery formula for " + y.id + " solved for " + x.id,
                      {1, -1}, {wy.provenance, tail.provenance})};
}

// ------------------------------------------------------------ other rules

WValue Engine::sign_twist_impl(const InvariantKey& key, const ClassVec& t, Ctx& ctx) const {
  const SurfaceModel& m = catalog_->surface(key.surface);
  Integer dt = pair(m.lattice, key.d, t);
  if (dt % 2 != 0) throw UnknownValue("d.t is odd");
  // F + t, rewritten as a union of components disjoint from L when possible.
  auto low = key.F.lower(m);
  if (!low) throw UnknownValue("F has no known mod-2 class");
  Mod2Class target = *low + Mod2Class::reduce(t);
  std::vector<std::string> free;
  for (const auto& c : m.components)
    if (std::find(key.L.begin(), key.L.end(), c.label) == key.L.end()) free.push_back(c.label);
  std::optional<FSpec> f2;
  for (unsigned mask = 0; mask < (1u << free.size()) && !f2; ++mask) {
    FSpec cand;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (mask & (1u << i)) cand.components.insert(free[i]);
    auto cl = cand.lower(m);
    if (cl && *cl == target) f2 = cand;
  }
  if (!f2) throw UnknownValue("F + t is not a union of real components");
  InvariantKey other(key.surface, key.L, *f2, key.d, key.s);
  WValue w = resolve(other, ctx);
  Integer sign = sign_pow(to_long(dt / 2));
  Integer value = sign * w.value;
  return {value, node(value, "sign_twist", key.describe(m), "twist by " + m.parser().format(t), {sign},
                      {w.provenance})};
}

WValue Engine::sign_twist(const InvariantKey& key, const ClassVec& t) const {
  validate_key(*catalog_, key);
  const SurfaceModel& m = catalog_->surface(key.surface);
  if (!m.is_twistable(t)) throw ValidationError(m.parser().format(t) + " is not asserted twistable on " + m.id);
  Ctx ctx;
  return sign_twist_impl(key, t, ctx);
}

WValue Engine::euler_char_lemma_impl(const InvariantKey& key) const {
  const SurfaceModel& m = catalog_->surface(key.surface);
  const auto& lat = m.lattice;
  if (!m.tags.count("del_pezzo_1")) throw UnknownValue("not a degree 1 del Pezzo surface");
  if (key.s != 0) throw UnknownValue("needs s = 0");
  if (key.L.size() != 1) throw UnknownValue("needs a single component in L");
  ClassVec gamma = key.d - m.c1;
  if (pair(lat, gamma, gamma) != -1 || m.c1_degree(gamma) != 1)
    throw UnknownValue("d - c1 is not an exceptional class");
  FSpec comp = FSpec::complement(m, key.L);
  auto a = key.F.lower(m), b = comp.lower(m);
  if (!(key.F == comp) && !(a && b && *a == *b)) throw UnknownValue("needs F = [RX minus L]");
  Integer value = 1 - m.euler_char();
  return {value, leaf(value, "euler_char_lemma", key.describe(m),
                      "c1 + exceptional class on a degree 1 del Pezzo: 1 - chi(RX), chi = " +
                          std::to_string(m.euler_char()),
                      "blow-down to a degree 2 del Pezzo surface and an Euler characteristic count")};
}

WValue Engine::euler_char_lemma(const InvariantKey& key) const {
  validate_key(*catalog_, key);
  return euler_char_lemma_impl(key);
}

WValue Engine::blowup_descent(const InvariantKey& key, const BlowupRecord& rec, Ctx& ctx) const {
  const SurfaceModel& x = catalog_->surface(rec.source);
  const SurfaceModel& y = catalog_->surface(rec.target);
  const std::size_t n0 = x.lattice.rank();
  long extra_pairs = 0;
  for (const auto& p : rec.points) {
    if (p.real) {
      auto e = static_cast<std::size_t>(y.lattice.index_of(p.labels[0]));
      if (key.d[e] != 0) throw UnknownValue("d meets the real exceptional curve " + p.labels[0]);
    } else {
      auto a = static_cast<std::size_t>(y.lattice.index_of(p.labels[0]));
      auto b = static_cast<std::size_t>(y.lattice.index_of(p.labels[1]));
      if (key.d[a] != key.d[b]) throw ConfigurationError("conjugate exceptional coefficients differ");
      Integer mult = -key.d[a];
      if (mult != 0 && mult != 1)
        throw UnknownValue("d passes through the pair " + p.labels[0] + "," + p.labels[1] + " with multiplicity " +
                           mult.str());
      extra_pairs += to_long(mult);
    }
  }
  if (key.F.has_extra())
    for (std::size_t i = n0; i < y.lattice.rank(); ++i)
      if (key.F.extra.bits[i]) throw UnknownValue("F involves an exceptional class");
  std::vector<std::string> L_x;
  for (const auto& l : key.L) L_x.push_back(*rec.origin.at(l).source);
  FSpec F_x;
  for (const auto& c : key.F.components) F_x.components.insert(*rec.origin.at(c).source);
  if (key.F.has_extra()) F_x.extra.bits.assign(key.F.extra.bits.begin(), key.F.extra.bits.begin() + n0);
  ClassVec d0(std::vector<Integer>(key.d.coords.begin(), key.d.coords.begin() + static_cast<long>(n0)));
  InvariantKey x_key(x.id, L_x, F_x, d0, key.s + extra_pairs);
  WValue w = resolve(x_key, ctx);
  return {w.value, node(w.value, "blowup_descent", key.describe(y),
                        "blow-down to " + x.id + ", conjugate pairs met: " + std::to_string(extra_pairs), {1},
                        {w.provenance})};
}

WValue Engine::equivalence(const InvariantKey& key, const std::string& other_id, Ctx& ctx) const {
  const SurfaceModel& m = catalog_->surface(key.surface);
  const SurfaceModel& o = catalog_->surface(other_id);
  std::size_t i = 0;
  while (i < m.c1.size() && m.c1[i] == 0) ++i;
  if (i == m.c1.size() || key.d[i] % m.c1[i] != 0) throw UnknownValue("d is not a multiple of c1");
  Integer lambda = key.d[i] / m.c1[i];
  if (!(lambda * m.c1 == key.d)) throw UnknownValue("d is not a multiple of c1");
  if (key.F.has_extra()) throw UnknownValue("F has an explicit class, which does not transport");
  for (const auto& l : key.L)
    if (!o.component(l)) throw UnknownValue("no component '" + l + "' on " + other_id);
  for (const auto& c : key.F.components)
    if (!o.component(c)) throw UnknownValue("no component '" + c + "' on " + other_id);
  InvariantKey ok(other_id, key.L, key.F, lambda * o.c1, key.s);
  WValue w = resolve(ok, ctx);
  return {w.value, node(w.value, "equivalence", key.describe(m), "deformation equivalent to " + other_id, {1},
                        {w.provenance})};
}

}  // namespace wsurg
