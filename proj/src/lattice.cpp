#include "wsurg/lattice.hpp"

#include "wsurg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace wsurg {

// ---------------------------------------------------------------- ClassVec

ClassVec ClassVec::from_ints(std::initializer_list<long> v) {
  ClassVec r;
  for (long x : v) r.coords.emplace_back(x);
  return r;
}

ClassVec ClassVec::unit(std::size_t rank, std::size_t i) {
  ClassVec r(rank);
  r.coords.at(i) = 1;
  return r;
}

bool ClassVec::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Integer& x) { return x == 0; });
}

ClassVec& ClassVec::operator+=(const ClassVec& o) {
  if (o.size() != size()) throw ValidationError("class dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) coords[i] += o.coords[i];
  return *this;
}

ClassVec& ClassVec::operator-=(const ClassVec& o) {
  if (o.size() != size()) throw ValidationError("class dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) coords[i] -= o.coords[i];
  return *this;
}

ClassVec operator-(ClassVec a) {
  for (auto& x : a.coords) x = -x;
  return a;
}

ClassVec operator*(const Integer& k, ClassVec a) {
  for (auto& x : a.coords) x *= k;
  return a;
}

std::string ClassVec::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += coords[i].str();
  }
  return s + ")";
}

// --------------------------------------------------------------- Mod2Class

Mod2Class Mod2Class::reduce(const ClassVec& v) {
  Mod2Class r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r.bits[i] = static_cast<std::uint8_t>((v[i] % 2 != 0) ? 1 : 0);
  return r;
}

bool Mod2Class::is_zero() const {
  return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 0; });
}

Mod2Class& Mod2Class::operator+=(const Mod2Class& o) {
  if (o.size() != size()) throw ValidationError("mod-2 class dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) bits[i] ^= o.bits[i];
  return *this;
}

std::string Mod2Class::to_string() const {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

Mod2Class Mod2Class::parse_bits(const std::string& s) {
  Mod2Class r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw ValidationError("bad mod-2 bit string: " + s);
    r.bits[i] = s[i] == '1';
  }
  return r;
}

// --------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw ValidationError("ragged matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<ClassVec>& cols) {
  std::size_t r = cols.empty() ? 0 : cols.front().size();
  IntMatrix m(r, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j][i];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ClassVec IntMatrix::column(std::size_t j) const {
  ClassVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

ClassVec IntMatrix::apply(const ClassVec& v) const {
  if (v.size() != cols_) throw ValidationError("matrix/vector dimension mismatch");
  ClassVec r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

Integer IntMatrix::trace() const {
  Integer t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool IntMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product dimension mismatch");
  IntMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("matrix difference dimension mismatch");
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

// ----------------------------------------------------- IntersectionLattice

IntersectionLattice::IntersectionLattice(IntMatrix gram, std::vector<std::string> basis_labels)
    : gram_(std::move(gram)), labels_(std::move(basis_labels)) {
  if (labels_.empty()) throw ValidationError("lattice rank must be positive");
  if (gram_.rows() != labels_.size() || gram_.cols() != labels_.size())
    throw ValidationError("gram matrix size does not match the number of basis labels");
  if (!gram_.is_symmetric()) throw ValidationError("gram matrix is not symmetric");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw ValidationError("basis labels are not distinct");
}

long IntersectionLattice::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<long>(it - labels_.begin());
}

ClassVec IntersectionLattice::basis_vector(const std::string& label) const {
  long i = index_of(label);
  if (i < 0) throw ValidationError("unknown basis label '" + label + "'");
  return ClassVec::unit(rank(), static_cast<std::size_t>(i));
}

IntersectionLattice IntersectionLattice::extended(const std::vector<std::string>& new_labels) const {
  std::size_t n = rank(), m = n + new_labels.size();
  IntMatrix g(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = gram_(i, j);
  for (std::size_t i = n; i < m; ++i) g(i, i) = -1;
  auto labels = labels_;
  labels.insert(labels.end(), new_labels.begin(), new_labels.end());
  return IntersectionLattice(std::move(g), std::move(labels));
}

// --------------------------------------------------------- InvolutionAction

void InvolutionAction::validate(const IntersectionLattice& lattice) const {
  std::size_t n = lattice.rank();
  if (matrix.rows() != n || matrix.cols() != n)
    throw ValidationError("involution matrix size does not match the lattice rank");
  if (!(matrix * matrix == IntMatrix::identity(n))) throw ValidationError("involution does not square to the identity");
  if (!(matrix.transpose() * lattice.gram() * matrix == lattice.gram()))
    throw ValidationError("involution is not an isometry of the intersection form");
}

bool InvolutionAction::is_anti_invariant(const ClassVec& v) const { return apply(v) == -v; }
bool InvolutionAction::is_invariant(const ClassVec& v) const { return apply(v) == v; }

// ------------------------------------------------------------- operations

Integer pair(const IntersectionLattice& lattice, const ClassVec& a, const ClassVec& b) {
  if (a.size() != lattice.rank() || b.size() != lattice.rank())
    throw ValidationError("pair: class dimension does not match lattice rank " + std::to_string(lattice.rank()));
  Integer r = 0;
  const auto& g = lattice.gram();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0 && g(i, j) != 0) r += a[i] * g(i, j) * b[j];
  }
  return r;
}

ClassVec reflect(const IntersectionLattice& lattice, const ClassVec& d, const ClassVec& s) {
  if (pair(lattice, s, s) != -2) throw ValidationError("reflect: class " + s.to_string() + " does not have square -2");
  return d + pair(lattice, d, s) * s;
}

IntMatrix reflection_matrix(const IntersectionLattice& lattice, const ClassVec& s) {
  std::vector<ClassVec> cols;
  for (std::size_t j = 0; j < lattice.rank(); ++j) cols.push_back(reflect(lattice, ClassVec::unit(lattice.rank(), j), s));
  return IntMatrix::from_columns(cols);
}

namespace {

// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
void ext_gcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  x = old_s;
  y = old_t;
}

// Floor division for the reduction step (keeps entries above pivots in [0, pivot)).
Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

// In-place row echelon reduction over Z restricted to the first `width`
// columns. Returns the pivot columns in order; rows beyond the pivots have
// zeros in the first `width` columns.
std::vector<std::size_t> echelonize(std::vector<ClassVec>& rows, std::size_t width) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      if (rows[r][col] == 0) {
        std::swap(rows[r], rows[i]);
        continue;
      }
      Integer g, x, y;
      ext_gcd(rows[r][col], rows[i][col], g, x, y);
      Integer a = rows[r][col] / g, b = rows[i][col] / g;
      ClassVec top = x * rows[r] + y * rows[i];
      ClassVec bottom = a * rows[i] - b * rows[r];
      rows[r] = std::move(top);
      rows[i] = std::move(bottom);
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0) rows[r] = -rows[r];
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(rows[i][col], rows[r][col]);
      if (q != 0) rows[i] -= q * rows[r];
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

}  // namespace

std::vector<ClassVec> hermite_basis(std::vector<ClassVec> rows) {
  if (rows.empty()) return rows;
  std::size_t width = rows.front().size();
  auto pivots = echelonize(rows, width);
  rows.resize(pivots.size());
  return rows;
}

std::vector<ClassVec> integer_kernel(const IntMatrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  // Rows (A^t row i | e_i); eliminating the left block leaves kernel vectors on the right.
  std::vector<ClassVec> rows;
  for (std::size_t i = 0; i < n; ++i) {
    ClassVec r(m + n);
    for (std::size_t k = 0; k < m; ++k) r[k] = a(k, i);
    r[m + i] = 1;
    rows.push_back(std::move(r));
  }
  auto pivots = echelonize(rows, m);
  std::vector<ClassVec> kernel;
  for (std::size_t i = pivots.size(); i < rows.size(); ++i) {
    ClassVec v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = rows[i][m + k];
    kernel.push_back(std::move(v));
  }
  return hermite_basis(std::move(kernel));
}

std::vector<ClassVec> eigenlattice(const InvolutionAction& inv, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("eigenlattice sign must be +1 or -1");
  std::size_t n = inv.matrix.rows();
  IntMatrix shifted = inv.matrix;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= sign;
  return integer_kernel(shifted);
}

bool lattice_contains(const std::vector<ClassVec>& basis, const ClassVec& v) {
  if (basis.empty()) return v.is_zero();
  auto rows = basis;
  rows.push_back(v);
  return hermite_basis(rows) == hermite_basis(basis);
}

bool same_lattice(const std::vector<ClassVec>& a, const std::vector<ClassVec>& b) {
  return hermite_basis(a) == hermite_basis(b);
}

std::vector<Mod2Class> mod2_span(std::vector<Mod2Class> rows) {
  if (rows.empty()) return rows;
  std::size_t n = rows.front().size(), r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p].bits[col]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].bits[col]) rows[i] += rows[r];
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::vector<Mod2Class> mod2_kernel(const std::vector<Mod2Class>& rows, std::size_t n) {
  auto red = mod2_span(rows);
  std::vector<std::size_t> pivot_col;
  for (const auto& row : red) {
    std::size_t c = 0;
    while (!row.bits[c]) ++c;
    pivot_col.push_back(c);
  }
  std::vector<Mod2Class> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    Mod2Class v(n);
    v.bits[free] = 1;
    for (std::size_t i = 0; i < red.size(); ++i)
      if (red[i].bits[free]) v.bits[pivot_col[i]] = 1;
    basis.push_back(std::move(v));
  }
  return mod2_span(std::move(basis));
}

int pair_mod2(const IntersectionLattice& lattice, const Mod2Class& a, const Mod2Class& b) {
  if (a.size() != lattice.rank() || b.size() != lattice.rank()) throw ValidationError("pair_mod2: dimension mismatch");
  int r = 0;
  const auto& g = lattice.gram();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.bits[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b.bits[j] && g(i, j) % 2 != 0) r ^= 1;
  }
  return r;
}

Integer adjunction_defect(const IntersectionLattice& lattice, const ClassVec& c1, const ClassVec& d, long genus) {
  return pair(lattice, d, d) - pair(lattice, c1, d) - 2 * genus + 2;
}

// ------------------------------------------------------------- AffineClass

ClassVec AffineClass::evaluate(const std::map<std::string, long>& params) const {
  ClassVec r = constant;
  for (const auto& [name, dir] : linear) {
    auto it = params.find(name);
    if (it == params.end()) throw ValidationError("missing value for parameter '" + name + "'");
    r += Integer(it->second) * dir;
  }
  return r;
}

// ------------------------------------------------------------- ClassParser

namespace {

class ExprLexer {
 public:
  explicit ExprLexer(const std::string& text) : text_(text) {}

  enum class Tok { Int, Ident, Plus, Minus, Star, LParen, RParen, End };

  Tok peek() {
    skip_ws();
    if (pos_ >= text_.size()) return Tok::End;
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return Tok::Int;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return Tok::Ident;
    switch (c) {
      case '+': return Tok::Plus;
      case '-': return Tok::Minus;
      case '*': return Tok::Star;
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      default: fail("unexpected character '" + std::string(1, c) + "'");
    }
    return Tok::End;
  }

  Integer take_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Integer(text_.substr(start, pos_ - start));
  }

  std::string take_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void take() {
    skip_ws();
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    std::ostringstream os;
    os << "cannot parse class expression: " << msg << "\n  " << text_ << "\n  " << std::string(at, ' ') << '^';
    throw ValidationError(os.str());
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

struct AffineParser {
  ExprLexer lex;
  const IntersectionLattice& lattice;
  const std::map<std::string, ClassVec>& aliases;
  bool allow_params;

  bool is_class_name(const std::string& name) const {
    return aliases.count(name) || lattice.index_of(name) >= 0;
  }

  ClassVec resolve(const std::string& name) const {
    if (auto it = aliases.find(name); it != aliases.end()) return it->second;
    return lattice.basis_vector(name);
  }

  AffineClass zero() const {
    AffineClass a;
    a.constant = ClassVec(lattice.rank());
    return a;
  }

  static void add_scaled(AffineClass& acc, const Integer& k, const AffineClass& x) {
    acc.constant += k * x.constant;
    for (const auto& [p, v] : x.linear) {
      auto it = acc.linear.find(p);
      if (it == acc.linear.end()) acc.linear.emplace(p, k * v);
      else it->second += k * v;
    }
  }

  AffineClass expr() {
    AffineClass acc = zero();
    bool first = true;
    for (;;) {
      Integer sign = 1;
      auto t = lex.peek();
      if (t == ExprLexer::Tok::Plus || t == ExprLexer::Tok::Minus) {
        if (t == ExprLexer::Tok::Minus) sign = -1;
        lex.take();
      } else if (!first) {
        break;
      }
      term(acc, sign);
      first = false;
      t = lex.peek();
      if (t != ExprLexer::Tok::Plus && t != ExprLexer::Tok::Minus) break;
    }
    return acc;
  }

  void term(AffineClass& acc, Integer coef) {
    std::optional<std::string> param;
    bool had_int = false;
    if (lex.peek() == ExprLexer::Tok::Int) {
      coef *= lex.take_int();
      had_int = true;
      if (lex.peek() == ExprLexer::Tok::Star) lex.take();
    }
    if (lex.peek() == ExprLexer::Tok::Ident) {
      std::size_t at = lex.pos();
      std::string name = lex.take_ident();
      if (!is_class_name(name)) {
        if (lex.peek() != ExprLexer::Tok::Star) lex.fail_at(at, "unknown class name '" + name + "'");
        if (!allow_params) lex.fail_at(at, "unknown class name '" + name + "' (parameters are not allowed here)");
        lex.take();
        param = name;
      } else {
        add_atom(acc, coef, param, resolved(name));
        return;
      }
    }
    auto t = lex.peek();
    if (t == ExprLexer::Tok::Ident) {
      std::size_t at = lex.pos();
      std::string name = lex.take_ident();
      if (!is_class_name(name)) lex.fail_at(at, "unknown class name '" + name + "'");
      add_atom(acc, coef, param, resolved(name));
    } else if (t == ExprLexer::Tok::LParen) {
      lex.take();
      AffineClass inner = expr();
      if (lex.peek() != ExprLexer::Tok::RParen) lex.fail("expected ')'");
      lex.take();
      add_atom(acc, coef, param, inner);
    } else if (had_int && !param && coef == 0) {
      // a bare "0" denotes the zero class
    } else {
      lex.fail("expected a class name or '('");
    }
  }

  AffineClass resolved(const std::string& name) const {
    AffineClass a = zero();
    a.constant = resolve(name);
    return a;
  }

  void add_atom(AffineClass& acc, const Integer& coef, const std::optional<std::string>& param, const AffineClass& atom) {
    if (!param) {
      add_scaled(acc, coef, atom);
      return;
    }
    if (!atom.linear.empty()) lex.fail("parameters may only multiply constant classes");
    auto it = acc.linear.find(*param);
    if (it == acc.linear.end()) acc.linear.emplace(*param, coef * atom.constant);
    else it->second += coef * atom.constant;
  }
};

}  // namespace

ClassParser::ClassParser(const IntersectionLattice& lattice, std::map<std::string, ClassVec> aliases)
    : lattice_(&lattice), aliases_(std::move(aliases)) {}

AffineClass ClassParser::parse_affine(const std::string& text) const {
  AffineParser p{ExprLexer(text), *lattice_, aliases_, true};
  if (p.lex.peek() == ExprLexer::Tok::End) p.lex.fail("empty expression");
  AffineClass r = p.expr();
  if (p.lex.peek() != ExprLexer::Tok::End) p.lex.fail("trailing input");
  return r;
}

ClassVec ClassParser::parse(const std::string& text) const {
  AffineParser p{ExprLexer(text), *lattice_, aliases_, false};
  if (p.lex.peek() == ExprLexer::Tok::End) p.lex.fail("empty expression");
  AffineClass r = p.expr();
  if (p.lex.peek() != ExprLexer::Tok::End) p.lex.fail("trailing input");
  return r.constant;
}

std::string ClassParser::format(const ClassVec& v) const {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    Integer a = abs(v[i]);
    if (v[i] < 0) s += "-";
    else if (!s.empty()) s += "+";
    if (a != 1) s += a.str();
    s += lattice_->labels()[i];
  }
  return s.empty() ? "0" : s;
}

}  // namespace wsurg
