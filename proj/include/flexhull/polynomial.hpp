#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Core>

namespace flexhull {

/// A point in the (p, q) plane: active power p, reactive power q.
using Point = Eigen::Vector2d;

/// Exponent pair of the monomial p^p * q^q.
struct Monomial {
  int p = 0;
  int q = 0;

  int degree() const { return p + q; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lexicographic order: lower total degree first, then higher
/// p-exponent first. Fixed project-wide; program row order depends on it.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.p > b.p;
  }
};

/// Sparse bivariate polynomial in canonical form (no stored zero
/// coefficients). Values are immutable after construction.
class Polynomial2 {
 public:
  using TermMap = std::map<Monomial, double, GradedLex>;

  Polynomial2() = default;
  Polynomial2(std::initializer_list<std::tuple<int, int, double>> terms);

  static Polynomial2 constant(double c);
  static Polynomial2 monomial(int i, int j, double c = 1.0);
  static Polynomial2 p() { return monomial(1, 0); }
  static Polynomial2 q() { return monomial(0, 1); }

  const TermMap& terms() const { return terms_; }
  double coeff(const Monomial& m) const;

  /// Zero polynomial has degree -1.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  double max_abs_coeff() const;

  double evaluate(const Point& x) const;
  double operator()(double p, double q) const { return evaluate(Point(p, q)); }

  /// Returns x -> this(center + scale * x).
  Polynomial2 affine_substitute(const Point& center, double scale) const;

  Polynomial2 operator-() const;
  Polynomial2& operator+=(const Polynomial2& other);
  Polynomial2& operator-=(const Polynomial2& other);
  Polynomial2& operator*=(double s);

  friend Polynomial2 operator+(Polynomial2 a, const Polynomial2& b) { return a += b; }
  friend Polynomial2 operator-(Polynomial2 a, const Polynomial2& b) { return a -= b; }
  friend Polynomial2 operator*(Polynomial2 a, double s) { return a *= s; }
  friend Polynomial2 operator*(double s, Polynomial2 a) { return a *= s; }
  friend Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b);
  friend bool operator==(const Polynomial2& a, const Polynomial2& b) {
    return a.terms_ == b.terms_;
  }

 private:
  void add_term(const Monomial& m, double c);

  TermMap terms_;
};

Polynomial2 poly_add(const Polynomial2& a, const Polynomial2& b);
Polynomial2 poly_mul(const Polynomial2& a, const Polynomial2& b);
double evaluate(const Polynomial2& a, const Point& x);

/// All monomials of degree <= max_degree in graded-lex order.
struct MonomialBasis {
  int max_degree = 0;
  std::vector<Monomial> entries;

  std::size_t size() const { return entries.size(); }
  /// z(x): the basis evaluated at a point.
  Eigen::VectorXd evaluate(const Point& x) const;
};

MonomialBasis basis(int max_degree);

struct GramPosition {
  int row = 0;
  int col = 0;
  friend bool operator==(const GramPosition&, const GramPosition&) = default;
};

/// For each monomial reachable as z_r * z_c, the positions (row <= col)
/// contributing to its coefficient in z^T X z. A diagonal hit contributes
/// X[r][r], an off-diagonal hit contributes 2 X[r][c].
using GramExpansion = std::map<Monomial, std::vector<GramPosition>, GradedLex>;

GramExpansion gram_expand(const MonomialBasis& b);

/// Polynomial z^T X z for a symmetric matrix X over the basis.
Polynomial2 gram_polynomial(const MonomialBasis& b, const Eigen::MatrixXd& gram);

}  // namespace flexhull
