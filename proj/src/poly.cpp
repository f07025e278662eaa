#include "nilgraph/poly.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace nilgraph {

VariableSet::VariableSet(std::vector<std::string> names, int max_degree)
    : names_(std::move(names)), max_degree_(max_degree) {
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw PolyError("variable name collision: " + n);
}

std::optional<std::size_t> VariableSet::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

VarsPtr make_variables(std::vector<std::string> names, int max_degree) {
  return std::make_shared<const VariableSet>(std::move(names), max_degree);
}

VarsPtr concat_variables(const VarsPtr& a, const VarsPtr& b, int max_degree) {
  std::vector<std::string> names = a->names();
  names.insert(names.end(), b->names().begin(), b->names().end());
  return make_variables(std::move(names), max_degree);
}

bool Poly::GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::constant(VarsPtr vars, const Rational& c) {
  Poly p;
  if (c != 0) p.terms_.emplace(Monomial(vars->size(), 0), c);
  p.vars_ = std::move(vars);
  return p;
}

Poly Poly::variable(VarsPtr vars, std::size_t index) {
  if (index >= vars->size()) throw PolyError("variable index out of range");
  Monomial m(vars->size(), 0);
  m[index] = 1;
  Poly p;
  p.terms_.emplace(std::move(m), Rational(1));
  p.vars_ = std::move(vars);
  return p;
}

bool Poly::is_constant() const { return degree() <= 0; }

int Poly::degree() const {
  if (terms_.empty()) return -1;
  const auto& m = terms_.rbegin()->first;
  return std::accumulate(m.begin(), m.end(), 0);
}

bool Poly::depends_on(std::size_t var) const {
  for (const auto& [m, c] : terms_)
    if (var < m.size() && m[var] > 0) return true;
  return false;
}

void Poly::check_degree() const {
  if (vars_ && degree() > vars_->max_degree())
    throw PolyError("polynomial degree " + std::to_string(degree()) + " exceeds ring bound " +
                    std::to_string(vars_->max_degree()));
}

void Poly::adopt(const VarsPtr& other) {
  if (vars_ || !other) return;
  TermMap remapped;
  for (auto& [m, c] : terms_) {
    if (!m.empty()) throw PolyError("cannot re-home a non-constant polynomial");
    remapped.emplace(Monomial(other->size(), 0), c);
  }
  terms_ = std::move(remapped);
  vars_ = other;
}

VarsPtr Poly::common(const Poly& a, const Poly& b) {
  if (!a.vars_) return b.vars_;
  if (!b.vars_ || a.vars_ == b.vars_) return a.vars_;
  if (a.vars_->names() == b.vars_->names()) return a.vars_;
  throw PolyError("polynomials over different variable sets");
}

Poly& Poly::operator+=(const Poly& o) {
  VarsPtr v = common(*this, o);
  adopt(v);
  Poly rhs = o;
  rhs.adopt(v);
  for (const auto& [m, c] : rhs.terms_) {
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  VarsPtr v = Poly::common(a, b);
  Poly x = a, y = b;
  x.adopt(v);
  y.adopt(v);
  Poly out;
  out.vars_ = v;
  if (x.is_zero() || y.is_zero()) return out;
  Poly::Monomial prod;
  for (const auto& [ma, ca] : x.terms_)
    for (const auto& [mb, cb] : y.terms_) {
      prod = ma;
      for (std::size_t i = 0; i < prod.size(); ++i) {
        unsigned e = unsigned(prod[i]) + mb[i];
        if (e > 255) throw PolyError("exponent overflow");
        prod[i] = static_cast<std::uint8_t>(e);
      }
      auto [it, inserted] = out.terms_.emplace(prod, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  for (auto it = out.terms_.begin(); it != out.terms_.end();) {
    if (it->second == 0)
      it = out.terms_.erase(it);
    else
      ++it;
  }
  out.check_degree();
  return out;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

bool Poly::operator==(const Poly& o) const {
  if (vars_ && o.vars_ && vars_ != o.vars_ && vars_->names() != o.vars_->names()) return false;
  if (terms_.size() != o.terms_.size()) return false;
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  for (; a != terms_.end(); ++a, ++b) {
    if (a->second != b->second) return false;
    const auto& ma = a->first;
    const auto& mb = b->first;
    // Constants without a variable set compare equal to their homed form.
    bool za = std::all_of(ma.begin(), ma.end(), [](auto e) { return e == 0; });
    bool zb = std::all_of(mb.begin(), mb.end(), [](auto e) { return e == 0; });
    if (za != zb) return false;
    if (!za && ma != mb) return false;
  }
  return true;
}

Poly Poly::partial(std::size_t var) const {
  Poly out;
  out.vars_ = vars_;
  for (const auto& [m, c] : terms_) {
    if (var >= m.size() || m[var] == 0) continue;
    Monomial d = m;
    Rational k(static_cast<int>(d[var]));
    --d[var];
    out.terms_.emplace(std::move(d), c * k);
  }
  return out;
}

Poly Poly::substitute(std::size_t var, const Rational& value) const {
  return substitute(var, Poly(value));
}

Poly Poly::substitute(std::size_t var, const Poly& value) const {
  if (vars_ && var >= vars_->size()) throw PolyError("variable index out of range");
  Poly out;
  out.vars_ = common(*this, value);
  std::vector<Poly> powers{Poly::constant(out.vars_ ? out.vars_ : vars_, 1)};
  for (const auto& [m, c] : terms_) {
    int e = var < m.size() ? m[var] : 0;
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
    Monomial rest = m;
    if (var < rest.size()) rest[var] = 0;
    Poly t;
    t.vars_ = vars_;
    t.terms_.emplace(std::move(rest), c);
    out += t * powers[e];
  }
  return out;
}

namespace {

template <typename T>
T power(const T& base, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Rational Poly::evaluate(std::span<const Rational> point) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    if (!m.empty() && point.size() < m.size()) throw PolyError("evaluation point too short");
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t *= power(point[i], m[i]);
    sum += t;
  }
  return sum;
}

double Poly::evaluate(std::span<const double> point) const { return FloatPoly(*this)(point); }

Poly Poly::exact_divide(const Poly& divisor) const {
  if (divisor.is_zero()) throw PolyError("division by zero polynomial");
  VarsPtr v = common(*this, divisor);
  Poly r = *this, d = divisor;
  r.adopt(v);
  d.adopt(v);
  Poly q;
  q.vars_ = v;
  const auto& [lm, lc] = *d.terms_.rbegin();
  while (!r.is_zero()) {
    const auto& [rm, rc] = *r.terms_.rbegin();
    Monomial t(rm.size(), 0);
    for (std::size_t i = 0; i < rm.size(); ++i) {
      if (rm[i] < lm[i]) throw PolyError("inexact polynomial division");
      t[i] = rm[i] - lm[i];
    }
    Poly term;
    term.vars_ = v;
    term.terms_.emplace(std::move(t), rc / lc);
    q += term;
    r -= term * d;
  }
  return q;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    bool is_const = std::all_of(m.begin(), m.end(), [](auto e) { return e == 0; });
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (is_const || mag != 1) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (wrote) os << '*';
      os << (vars_ ? vars_->name(i) : "x" + std::to_string(i + 1));
      if (m[i] > 1) os << '^' << int(m[i]);
      wrote = true;
    }
  }
  return os.str();
}

Poly pow(const Poly& p, int e) {
  Poly r = p.variables() ? Poly::constant(p.variables(), 1) : Poly(1);
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

FloatPoly::FloatPoly(const Poly& p) {
  for (const auto& [m, c] : p.terms()) {
    Term t{to_double(c), {}};
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t.factors.emplace_back(static_cast<std::uint32_t>(i), m[i]);
    terms_.push_back(std::move(t));
  }
}

double FloatPoly::operator()(std::span<const double> point) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (auto [i, e] : t.factors) {
      double x = point[i];
      for (int k = 0; k < e; ++k) v *= x;
    }
    sum += v;
  }
  return sum;
}

namespace {

Poly zero_like(const DenseMatrix<Poly>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).variables()) return Poly::zero(m(i, j).variables());
  return Poly();
}

Poly cofactor_det(const DenseMatrix<Poly>& m, std::vector<std::size_t>& rows, std::vector<std::size_t>& cols,
                  const Poly& zero) {
  const std::size_t n = rows.size();
  if (n == 0) return zero + Poly(1);
  if (n == 1) return m(rows[0], cols[0]);
  Poly sum = zero;
  std::size_t r0 = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < n; ++k) {
    const Poly& a = m(r0, cols[k]);
    if (a.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    Poly sub = cofactor_det(m, sub_rows, sub_cols, zero);
    if (k % 2 == 0)
      sum += a * sub;
    else
      sum -= a * sub;
  }
  return sum;
}

Poly bareiss_det(DenseMatrix<Poly> a, const Poly& zero) {
  const std::size_t n = a.rows();
  Poly prev = zero + Poly(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a(p, k).is_zero()) ++p;
      if (p == n) return zero;
      a.swap_rows(k, p);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)).exact_divide(prev);
    prev = a(k, k);
  }
  return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

Poly pfaffian_rec(const DenseMatrix<Poly>& m, const std::vector<std::size_t>& idx, const Poly& zero) {
  if (idx.empty()) return zero + Poly(1);
  Poly sum = zero;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const Poly& a = m(idx[j], idx[0]);
    if (a.is_zero()) continue;
    std::vector<std::size_t> rest;
    for (std::size_t t = 1; t < idx.size(); ++t)
      if (t != j) rest.push_back(idx[t]);
    Poly sub = a * pfaffian_rec(m, rest, zero);
    if (j % 2 == 1)
      sum += sub;
    else
      sum -= sub;
  }
  return sum;
}

}  // namespace

Poly det_poly(const DenseMatrix<Poly>& m) {
  if (m.rows() != m.cols()) throw PolyError("determinant of a non-square matrix");
  if (m.rows() > 12) throw PolyError("determinant limited to 12x12");
  Poly zero = zero_like(m);
  if (m.rows() <= 6) {
    std::vector<std::size_t> rows(m.rows()), cols(m.cols());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    return cofactor_det(m, rows, cols, zero);
  }
  return bareiss_det(m, zero);
}

Poly pfaffian_poly(const DenseMatrix<Poly>& m) {
  if (m.rows() != m.cols()) throw PolyError("Pfaffian of a non-square matrix");
  if (m.rows() % 2 != 0) throw PolyError("Pfaffian of an odd-dimensional matrix");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (m(i, j) != -m(j, i)) throw PolyError("Pfaffian of a non-skew-symmetric matrix");
  std::vector<std::size_t> idx(m.rows());
  std::iota(idx.begin(), idx.end(), 0);
  return pfaffian_rec(m, idx, zero_like(m));
}

}  // namespace nilgraph
