#include "wsurg/errors.hpp"
#include "wsurg/recursion.hpp"

#include <limits>
#include <sstream>

namespace wsurg {

using nlohmann::json;

json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return v.str();
}

namespace {

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw ValidationError("provenance: expected an integer value");
}

}  // namespace

json provenance_to_json(const Provenance& p) {
  json j;
  j["rule"] = p.rule;
  j["key"] = p.key;
  j["value"] = integer_to_json(p.value);
  if (!p.citation.empty()) j["citation"] = p.citation;
  if (!p.note.empty()) j["note"] = p.note;
  if (!p.children.empty()) {
    json coefs = json::array(), kids = json::array();
    for (std::size_t i = 0; i < p.children.size(); ++i) {
      coefs.push_back(integer_to_json(p.coefficients[i]));
      kids.push_back(provenance_to_json(*p.children[i]));
    }
    j["coefficients"] = coefs;
    j["children"] = kids;
  }
  return j;
}

bool replay(const Provenance& p) {
  if (p.children.size() != p.coefficients.size()) return false;
  if (p.children.empty()) return true;
  Integer acc = 0;
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    if (!replay(*p.children[i])) return false;
    acc += p.coefficients[i] * p.children[i]->value;
  }
  return acc == p.value;
}

bool replay_json(const json& j) {
  Integer value = integer_from_json(j.at("value"));
  if (!j.contains("children")) return true;
  const json& kids = j.at("children");
  const json& coefs = j.at("coefficients");
  if (kids.size() != coefs.size()) return false;
  Integer acc = 0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!replay_json(kids[i])) return false;
    acc += integer_from_json(coefs[i]) * integer_from_json(kids[i].at("value"));
  }
  return acc == value;
}

namespace {

void render(const Provenance& p, int depth, int max_depth, const std::string& coef, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(2 * depth), ' ');
  if (!coef.empty()) out << coef << " * ";
  out << p.key << " = " << p.value << "  [" << p.rule;
  if (!p.note.empty()) out << ": " << p.note;
  out << "]";
  if (!p.citation.empty()) out << "  (" << p.citation << ")";
  out << "\n";
  if (max_depth >= 0 && depth >= max_depth) return;
  for (std::size_t i = 0; i < p.children.size(); ++i)
    render(*p.children[i], depth + 1, max_depth, p.coefficients[i].str(), out);
}

}  // namespace

std::string render_trace(const Provenance& p, int max_depth) {
  std::ostringstream out;
  render(p, 0, max_depth, "", out);
  return out.str();
}

std::string VanishingPolicy::fingerprint() const {
  std::string f = "adj=" + std::to_string(use_adjunction) + ";exc=" + std::to_string(use_exceptional) +
                  ";max_k=" + std::to_string(max_k);
  if (user_predicate) f += ";user=" + (predicate_name.empty() ? std::string("anonymous") : predicate_name);
  return f;
}

Integer u_sequence(long i) {
  if (i < 0) throw ValidationError("u_sequence: negative index");
  Integer u = 0;
  for (long l = 0; 2 * l <= i; ++l) {
    long k = i - 2 * l;
    u += sign_pow(l) * pow2(k) * binom(k + l, k);
  }
  return u;
}

Integer reduction_coefficient(long m, long k) {
  return sign_pow(k) * (binom(m + k, m) + binom(m + k - 1, m));
}

Integer forward_coefficient(long m, long k) { return binom(m + 2 * k, k); }

bool verify_inverse_matrix(long m, long K) {
  if (m < 0 || K < 1) throw ValidationError("verify_inverse_matrix: need m >= 0 and K >= 1");
  auto M = [&](long i, long j) { return binom(m + 2 * (j - 1), j - i); };
  auto N = [&](long i, long j) {
    return sign_pow(i + j) * (binom(m + i + j - 2, m + 2 * i - 2) + binom(m + i + j - 3, m + 2 * i - 2));
  };
  for (long i = 1; i <= K; ++i)
    for (long j = 1; j <= K; ++j) {
      Integer acc = 0;
      for (long k = 1; k <= K; ++k) acc += M(i, k) * N(k, j);
      if (acc != (i == j ? 1 : 0)) return false;
    }
  // Row i of the inverse is the reduction series for d - 2(i-1)E.
  for (long i = 1; i <= K; ++i)
    for (long j = i; j <= K; ++j)
      if (N(i, j) != reduction_coefficient(m + 2 * (i - 1), j - i)) return false;
  return true;
}

bool verify_relation_roundtrip(long m, const std::vector<Integer>& tail) {
  if (m < 0) throw ValidationError("verify_relation_roundtrip: need m >= 0");
  // a[i] = W^{U-E}(d - 2iE), zero past the tail; b[i] = W^U(d - 2iE).
  const long n = static_cast<long>(tail.size());
  std::vector<Integer> b(tail.size(), 0);
  for (long i = 0; i < n; ++i)
    for (long k = 0; i + k < n; ++k) b[i] += reduction_coefficient(m + 2 * i, k) * tail[i + k];
  for (long i = 0; i < n; ++i) {
    Integer a = 0;
    for (long k = 0; i + k < n; ++k) a += forward_coefficient(m + 2 * i, k) * b[i + k];
    if (a != tail[i]) return false;
  }
  return true;
}

}  // namespace wsurg
