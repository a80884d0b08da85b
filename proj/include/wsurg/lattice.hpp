#pragma once

// Exact integer lattice algebra: the intersection pairing on H_2, involution
// actions, eigenlattices, (-2)-reflections and the adjunction filter.

#include "wsurg/integer.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wsurg {

/// A class in H_2(X; Z), as coordinates in a named basis.
struct ClassVec {
  std::vector<Integer> coords;

  ClassVec() = default;
  explicit ClassVec(std::size_t rank) : coords(rank, 0) {}
  explicit ClassVec(std::vector<Integer> c) : coords(std::move(c)) {}
  static ClassVec from_ints(std::initializer_list<long> v);
  static ClassVec unit(std::size_t rank, std::size_t i);

  std::size_t size() const { return coords.size(); }
  bool is_zero() const;
  const Integer& operator[](std::size_t i) const { return coords[i]; }
  Integer& operator[](std::size_t i) { return coords[i]; }

  ClassVec& operator+=(const ClassVec& o);
  ClassVec& operator-=(const ClassVec& o);
  friend ClassVec operator+(ClassVec a, const ClassVec& b) { return a += b; }
  friend ClassVec operator-(ClassVec a, const ClassVec& b) { return a -= b; }
  friend ClassVec operator-(ClassVec a);
  friend ClassVec operator*(const Integer& k, ClassVec a);
  friend bool operator==(const ClassVec&, const ClassVec&) = default;
  friend auto operator<=>(const ClassVec& a, const ClassVec& b) { return a.coords <=> b.coords; }

  std::string to_string() const;  // "(1,-1,0)"
};

/// A class in H_2(X; Z/2).
struct Mod2Class {
  std::vector<std::uint8_t> bits;

  Mod2Class() = default;
  explicit Mod2Class(std::size_t rank) : bits(rank, 0) {}
  static Mod2Class reduce(const ClassVec& v);

  std::size_t size() const { return bits.size(); }
  bool is_zero() const;
  Mod2Class& operator+=(const Mod2Class& o);
  friend Mod2Class operator+(Mod2Class a, const Mod2Class& b) { return a += b; }
  friend bool operator==(const Mod2Class&, const Mod2Class&) = default;
  friend auto operator<=>(const Mod2Class& a, const Mod2Class& b) { return a.bits <=> b.bits; }

  std::string to_string() const;  // "0110..."
  static Mod2Class parse_bits(const std::string& s);
};

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  static IntMatrix from_columns(const std::vector<ClassVec>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const;
  ClassVec column(std::size_t j) const;
  ClassVec apply(const ClassVec& v) const;
  Integer trace() const;
  bool is_symmetric() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// H_2(X; Z) with its intersection form in a named basis.
class IntersectionLattice {
 public:
  IntersectionLattice() = default;
  /// Throws ValidationError unless gram is square, symmetric and matches the labels.
  IntersectionLattice(IntMatrix gram, std::vector<std::string> basis_labels);

  std::size_t rank() const { return labels_.size(); }
  const IntMatrix& gram() const { return gram_; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of a basis label, or -1.
  long index_of(const std::string& label) const;
  ClassVec basis_vector(const std::string& label) const;

  /// Orthogonal direct sum with k new classes of square -1 (blow-up).
  IntersectionLattice extended(const std::vector<std::string>& new_labels) const;

  friend bool operator==(const IntersectionLattice&, const IntersectionLattice&) = default;

 private:
  IntMatrix gram_;
  std::vector<std::string> labels_;
};

/// The action of the real structure on H_2, as a matrix whose column j is
/// the image of basis vector j.
struct InvolutionAction {
  IntMatrix matrix;

  ClassVec apply(const ClassVec& v) const { return matrix.apply(v); }
  /// Throws ValidationError unless T^2 = I and T^t G T = G.
  void validate(const IntersectionLattice& lattice) const;
  bool is_anti_invariant(const ClassVec& v) const;
  bool is_invariant(const ClassVec& v) const;
};

/// a^t G b.
Integer pair(const IntersectionLattice& lattice, const ClassVec& a, const ClassVec& b);

/// Reflection in a (-2)-class: d + (d.s) s.
ClassVec reflect(const IntersectionLattice& lattice, const ClassVec& d, const ClassVec& s);

/// The matrix of reflect(., s).
IntMatrix reflection_matrix(const IntersectionLattice& lattice, const ClassVec& s);

/// Z-basis (in Hermite normal form) of the saturated sublattice {x : T x = sign x}.
std::vector<ClassVec> eigenlattice(const InvolutionAction& inv, int sign);

/// Z-basis of the kernel of an integer matrix, in Hermite normal form.
std::vector<ClassVec> integer_kernel(const IntMatrix& a);

/// Row Hermite normal form of the lattice spanned by the given vectors
/// (zero rows dropped, positive pivots, entries above pivots reduced).
std::vector<ClassVec> hermite_basis(std::vector<ClassVec> rows);

/// Whether v lies in the Z-span of basis.
bool lattice_contains(const std::vector<ClassVec>& basis, const ClassVec& v);

/// Whether two families span the same sublattice.
bool same_lattice(const std::vector<ClassVec>& a, const std::vector<ClassVec>& b);

/// Basis of {x in F_2^n : M x = 0} in reduced row echelon form.
std::vector<Mod2Class> mod2_kernel(const std::vector<Mod2Class>& rows, std::size_t n);

/// Reduced row echelon basis of the F_2-span.
std::vector<Mod2Class> mod2_span(std::vector<Mod2Class> rows);

/// Mod-2 intersection of two classes.
int pair_mod2(const IntersectionLattice& lattice, const Mod2Class& a, const Mod2Class& b);

/// d^2 - c1.d - 2g + 2. Negative means d carries no immersed irreducible
/// genus-g curve.
Integer adjunction_defect(const IntersectionLattice& lattice, const ClassVec& c1,
                          const ClassVec& d, long genus);

/// An affine class expression: constant + sum_p p * direction_p, for integer
/// parameters p (used by registry patterns such as "c1+b*F").
struct AffineClass {
  ClassVec constant;
  std::map<std::string, ClassVec> linear;

  ClassVec evaluate(const std::map<std::string, long>& params) const;
};

/// Parses symbolic class expressions over basis labels and aliases, e.g.
/// "3D-E1-E2-E3-E4-E5-E6", "c1+2F", "2c1-Et1", "2(c1-F)".
class ClassParser {
 public:
  ClassParser(const IntersectionLattice& lattice, std::map<std::string, ClassVec> aliases);

  /// Throws ValidationError with a caret diagnostic on malformed input.
  ClassVec parse(const std::string& text) const;
  /// As parse, but unknown identifiers used as coefficients become parameters.
  AffineClass parse_affine(const std::string& text) const;

  /// Renders a class as a combination of basis labels.
  std::string format(const ClassVec& v) const;

 private:
  const IntersectionLattice* lattice_;
  std::map<std::string, ClassVec> aliases_;
};

}  // namespace wsurg
