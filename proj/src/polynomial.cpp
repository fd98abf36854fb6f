#include "flexhull/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace flexhull {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// C(n, k) for small n.
double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Polynomial2::Polynomial2(std::initializer_list<std::tuple<int, int, double>> terms) {
  for (const auto& [i, j, c] : terms) add_term(Monomial{i, j}, c);
}

Polynomial2 Polynomial2::constant(double c) { return monomial(0, 0, c); }

Polynomial2 Polynomial2::monomial(int i, int j, double c) {
  Polynomial2 r;
  r.add_term(Monomial{i, j}, c);
  return r;
}

void Polynomial2::add_term(const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial2::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial2::degree() const {
  // Graded order: the last term has the highest degree.
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

double Polynomial2::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial2::evaluate(const Point& x) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) sum += c * ipow(x.x(), m.p) * ipow(x.y(), m.q);
  return sum;
}

Polynomial2 Polynomial2::affine_substitute(const Point& center, double scale) const {
  Polynomial2 out;
  for (const auto& [m, c] : terms_) {
    // (cp + L p)^i (cq + L q)^j expanded binomially.
    for (int a = 0; a <= m.p; ++a) {
      const double fa = binomial(m.p, a) * ipow(center.x(), m.p - a) * ipow(scale, a);
      for (int b = 0; b <= m.q; ++b) {
        const double fb = binomial(m.q, b) * ipow(center.y(), m.q - b) * ipow(scale, b);
        out.add_term(Monomial{a, b}, c * fa * fb);
      }
    }
  }
  return out;
}

Polynomial2 Polynomial2::operator-() const {
  Polynomial2 r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial2& Polynomial2::operator+=(const Polynomial2& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial2& Polynomial2::operator-=(const Polynomial2& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial2& Polynomial2::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b) {
  Polynomial2 r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(Monomial{ma.p + mb.p, ma.q + mb.q}, ca * cb);
  return r;
}

Polynomial2 poly_add(const Polynomial2& a, const Polynomial2& b) { return a + b; }
Polynomial2 poly_mul(const Polynomial2& a, const Polynomial2& b) { return a * b; }
double evaluate(const Polynomial2& a, const Point& x) { return a.evaluate(x); }

Eigen::VectorXd MonomialBasis::evaluate(const Point& x) const {
  Eigen::VectorXd z(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    z[static_cast<Eigen::Index>(i)] = ipow(x.x(), entries[i].p) * ipow(x.y(), entries[i].q);
  return z;
}

MonomialBasis basis(int max_degree) {
  MonomialBasis b;
  b.max_degree = max_degree;
  for (int d = 0; d <= max_degree; ++d)
    for (int i = d; i >= 0; --i) b.entries.push_back(Monomial{i, d - i});
  return b;
}

GramExpansion gram_expand(const MonomialBasis& b) {
  GramExpansion out;
  const int n = static_cast<int>(b.size());
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const Monomial m{b.entries[r].p + b.entries[c].p, b.entries[r].q + b.entries[c].q};
      out[m].push_back(GramPosition{r, c});
    }
  return out;
}

Polynomial2 gram_polynomial(const MonomialBasis& b, const Eigen::MatrixXd& gram) {
  Polynomial2 out;
  for (const auto& [m, positions] : gram_expand(b)) {
    double c = 0.0;
    for (const auto& pos : positions)
      c += pos.row == pos.col ? gram(pos.row, pos.col) : 2.0 * gram(pos.row, pos.col);
    out += Polynomial2::monomial(m.p, m.q, c);
  }
  return out;
}

}  // namespace flexhull
