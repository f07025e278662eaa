#pragma once

#include "nilgraph/matrix.hpp"
#include "nilgraph/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nilgraph {

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered, named variables shared by every polynomial of one ring, plus the
/// degree ceiling that polynomials of the ring are checked against.
class VariableSet {
 public:
  VariableSet(std::vector<std::string> names, int max_degree);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  int max_degree() const { return max_degree_; }

 private:
  std::vector<std::string> names_;
  int max_degree_;
};

using VarsPtr = std::shared_ptr<const VariableSet>;

VarsPtr make_variables(std::vector<std::string> names, int max_degree);

/// Union of two variable sets; throws PolyError when a name occurs in both.
VarsPtr concat_variables(const VarsPtr& a, const VarsPtr& b, int max_degree);

/// Sparse multivariate polynomial with rational coefficients. Terms are kept in
/// graded-lexicographic order with no zero coefficients, so equality and
/// zero-testing are structural.
///
/// A polynomial without a variable set is a bare constant; it adopts the
/// variable set of the other operand in mixed arithmetic.
class Poly {
 public:
  using Monomial = std::vector<std::uint8_t>;

  struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
  };
  using TermMap = std::map<Monomial, Rational, GrlexLess>;

  Poly() = default;
  Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static Poly constant(VarsPtr vars, const Rational& c);
  static Poly variable(VarsPtr vars, std::size_t index);
  static Poly zero(VarsPtr vars) { return constant(std::move(vars), 0); }

  const VarsPtr& variables() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool depends_on(std::size_t var) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly operator-() const;

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly partial(std::size_t var) const;
  Poly substitute(std::size_t var, const Rational& value) const;
  Poly substitute(std::size_t var, const Poly& value) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  /// Quotient of an exact division; throws PolyError when `divisor` does not divide.
  Poly exact_divide(const Poly& divisor) const;

  /// Deterministic rendering, leading (graded-lex largest) term first.
  std::string to_string() const;

 private:
  void check_degree() const;
  void adopt(const VarsPtr& other);
  static VarsPtr common(const Poly& a, const Poly& b);

  VarsPtr vars_;
  TermMap terms_;
};

Poly pow(const Poly& p, int e);

/// Polynomial flattened for fast repeated floating-point evaluation.
class FloatPoly {
 public:
  FloatPoly() = default;
  explicit FloatPoly(const Poly& p);
  double operator()(std::span<const double> point) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<std::uint32_t, std::uint8_t>> factors;
  };
  std::vector<Term> terms_;
};

/// Exact determinant: cofactor expansion up to 6x6, fraction-free (Bareiss)
/// elimination above. Square input up to 12x12.
Poly det_poly(const DenseMatrix<Poly>& m);

/// Pfaffian of an even-dimensional skew-symmetric matrix, expanded along the
/// first column: Pf = sum_{j>=1} (-1)^(j+1) m(j,0) Pf(minor without rows/cols 0, j)
/// (0-based), so the 2x2 matrix [[0,-a],[a,0]] has Pfaffian a.
Poly pfaffian_poly(const DenseMatrix<Poly>& m);

inline bool is_zero(const Poly& p) { return p.is_zero(); }

}  // namespace nilgraph
