#include "nilgraph/quotient.hpp"

#include "nilgraph/graph.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

namespace nilgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

AlgebraVector<Rational> rational_point(const GraphAlgebra& alg, RationalSampler& rs) {
  AlgebraVector<Rational> x = alg.zero(Rational(0));
  for (int i = 0; i < alg.dim(); ++i) x[i] = rs();
  return x;
}

}  // namespace

StarLattice::StarLattice(int k, long r, std::vector<long> r_vec, std::vector<long> m_vec)
    : k_(k), r_(r), r_vec_(std::move(r_vec)), m_vec_(std::move(m_vec)),
      alg_(generate_named("S", std::max(k, 1))) {
  if (k < 1) throw QuotientError("k must be a positive integer");
  if (r < 1) throw QuotientError("r must be a positive integer");
  if (static_cast<int>(r_vec_.size()) != k) throw QuotientError("expected " + std::to_string(k) + " values r_1..r_k");
  if (static_cast<int>(m_vec_.size()) != k) throw QuotientError("expected " + std::to_string(k) + " values m_1..m_k");
  long m0 = 1;
  for (long x : r_vec_)
    if (x < 1) throw QuotientError("r_i must be positive integers");
  for (long x : m_vec_) {
    if (x < 1) throw QuotientError("m_i must be positive integers");
    m0 *= x;
  }
  factors_.push_back(r * m0);
  for (long x : r_vec_) factors_.push_back(2 * x);
  for (long x : m_vec_) factors_.push_back(x);
}

bool StarLattice::contains(const AlgebraVector<Rational>& g) const {
  alg_.check(g);
  for (int i = 0; i < alg_.dim(); ++i) {
    Rational q = g[i] / factors_[i];
    if (!is_integer(q)) return false;
  }
  return true;
}

AlgebraVector<Rational> StarLattice::element(const std::vector<long>& multipliers) const {
  if (static_cast<int>(multipliers.size()) != alg_.dim()) throw QuotientError("wrong number of multipliers");
  AlgebraVector<Rational> g = alg_.zero(Rational(0));
  for (int i = 0; i < alg_.dim(); ++i) g[i] = Rational(multipliers[i]) * factors_[i];
  return g;
}

std::vector<AlgebraVector<Rational>> StarLattice::generators() const {
  std::vector<AlgebraVector<Rational>> out;
  for (int i = 0; i < alg_.dim(); ++i) {
    std::vector<long> m(alg_.dim(), 0);
    m[i] = 1;
    out.push_back(element(m));
  }
  return out;
}

AlgebraVector<Rational> StarLattice::random_element(std::mt19937_64& rng, int bound) const {
  std::uniform_int_distribution<long> d(-bound, bound);
  std::vector<long> m(alg_.dim());
  for (auto& x : m) x = d(rng);
  return element(m);
}

ClosureReport lattice_closure_check(const StarLattice& lattice, int pairs, std::uint64_t seed) {
  const auto& alg = lattice.algebra();
  auto gens = lattice.generators();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::bernoulli_distribution flip(0.5);
  ClosureReport rep;
  rep.closed = lattice.contains(alg.zero(Rational(0)));
  auto check = [&](const AlgebraVector<Rational>& a, const AlgebraVector<Rational>& b) {
    // inverse in exponential coordinates is negation
    for (const auto& g : {group_product(alg, a, b), group_product(alg, b, a), group_product(alg, a, -b)}) {
      ++rep.products_checked;
      if (!lattice.contains(g)) rep.closed = false;
    }
  };
  for (int i = 0; i < pairs; ++i) {
    auto a = gens[pick(rng)], b = gens[pick(rng)];
    if (flip(rng)) a = -a;
    if (flip(rng)) b = -b;
    check(a, b);
    check(lattice.random_element(rng), lattice.random_element(rng));
  }
  return rep;
}

bool invariant_descent_check(const FirstIntegral& f) {
  for (std::size_t i = 0; i < f.grad_base.size(); ++i)
    if (!f.grad_base[i].is_zero()) return false;
  return true;
}

bool mod_relation_check(const StarLattice& lattice, int samples, std::uint64_t seed) {
  const auto& alg = lattice.algebra();
  auto space = make_phase_space(alg);
  RationalSampler rs(seed);
  std::mt19937_64 rng(seed);
  for (int j = 1; j <= lattice.k(); ++j) {
    FirstIntegral a = killing_integral(space, alg.vertex(j));
    FirstIntegral b = center_integral(space, alg.center(j - 1).z);
    for (int s = 0; s < samples; ++s) {
      TangentPoint<Rational> p{rational_point(alg, rs), rational_point(alg, rs)};
      p.y.z[j - 1] = rs.nonzero();
      auto q = lattice.random_element(rng);
      if (!lattice.contains(q)) return false;
      TangentPoint<Rational> qp{group_product(alg, q, p.w), p.y};
      Rational diff = evaluate(a, qp) - evaluate(a, p);
      Rational ratio = diff / evaluate(b, p);
      if (!is_integer(ratio)) return false;
    }
  }
  return true;
}

namespace {

int checked_leaf(const SpacePtr& space, int j) {
  const auto& g = space->algebra().graph();
  const int k = space->algebra().dim_v() - 1;
  if (k < 1 || !(g == generate_named("S", k))) throw QuotientError("smooth quotient integrals need the star graph");
  if (j < 1 || j > k) throw QuotientError("index j must lie in 1.." + std::to_string(k));
  return j;
}

}  // namespace

SmoothQuotientIntegral::SmoothQuotientIntegral(const SpacePtr& space, int j)
    : j_(checked_leaf(space, j)),
      name_("F" + std::to_string(j)),
      a_(killing_integral(space, space->algebra().vertex(j))),
      b_(center_integral(space, space->algebra().center(j - 1).z)) {}

double SmoothQuotientIntegral::value(const TangentPoint<double>& at) const {
  for (std::size_t i = 0; i < at.w.size(); ++i)
    if (!std::isfinite(at.w[i]) || !std::isfinite(at.y[i])) throw QuotientError("non-finite input");
  const double b = b_.value(at);
  if (b == 0.0) return 0.0;
  const double a = a_.value(at);
  return std::exp(-1.0 / (b * b)) * std::sin(kTwoPi * a / b);
}

std::vector<double> SmoothQuotientIntegral::gradient(const TangentPoint<double>& at) const {
  const double b = b_.value(at);
  auto ga = a_.gradient(at);
  if (b == 0.0) return std::vector<double>(ga.size(), 0.0);
  const double a = a_.value(at);
  auto gb = b_.gradient(at);
  const double damp = std::exp(-1.0 / (b * b));
  const double th = kTwoPi * a / b;
  const double da = damp * std::cos(th) * kTwoPi / b;
  const double db = damp * ((2.0 / (b * b * b)) * std::sin(th) - std::cos(th) * kTwoPi * a / (b * b));
  std::vector<double> out(ga.size());
  for (std::size_t i = 0; i < ga.size(); ++i) out[i] = da * ga[i] + db * gb[i];
  return out;
}

TangentPoint<double> random_star_point(const GraphAlgebra& alg, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0), mag(lo, hi);
  std::bernoulli_distribution sign(0.5);
  TangentPoint<double> p{alg.zero(0.0), alg.zero(0.0)};
  for (int i = 0; i < alg.dim(); ++i) {
    p.w[i] = uni(rng);
    p.y[i] = uni(rng);
  }
  for (auto& z : p.y.z) z = sign(rng) ? mag(rng) : -mag(rng);
  return p;
}

double invariance_residual(const StarLattice& lattice, int samples, std::uint64_t seed) {
  const auto& alg = lattice.algebra();
  auto space = make_phase_space(alg);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int j = 1; j <= lattice.k(); ++j) {
    SmoothQuotientIntegral f(space, j);
    for (int s = 0; s < samples; ++s) {
      auto p = random_star_point(alg, rng);
      auto q = to_double(lattice.random_element(rng));
      TangentPoint<double> qp{group_product(alg, q, p.w), p.y};
      worst = std::max(worst, std::abs(f.value(qp) - f.value(p)));
    }
  }
  return worst;
}

double QuotientInvolution::max_residual() const {
  double m = 0.0;
  for (const auto& row : residual)
    for (double x : row) m = std::max(m, x);
  return m;
}

namespace {

struct QuotientFamily {
  std::vector<std::string> names;
  std::vector<std::function<std::vector<double>(const TangentPoint<double>&)>> grads;
};

QuotientFamily quotient_family(const SpacePtr& space, int k) {
  QuotientFamily fam;
  std::vector<FirstIntegral> poly{energy(space)};
  for (int i = 0; i < k; ++i) poly.push_back(center_integral(space, space->algebra().center(i).z));
  for (const auto& f : poly) {
    auto c = std::make_shared<CompiledIntegral>(f);
    fam.names.push_back(f.name);
    fam.grads.push_back([c](const TangentPoint<double>& p) { return c->gradient(p); });
  }
  for (int j = 1; j <= k; ++j) {
    auto c = std::make_shared<SmoothQuotientIntegral>(space, j);
    fam.names.push_back(c->name());
    fam.grads.push_back([c](const TangentPoint<double>& p) { return c->gradient(p); });
  }
  return fam;
}

double float_bracket(const GraphAlgebra& alg, const TangentPoint<double>& p, const std::vector<double>& f,
                     const std::vector<double>& g) {
  const std::size_t n = alg.dim();
  auto part = [&](const std::vector<double>& x, std::size_t off) {
    return unflatten(alg, std::vector<double>(x.begin() + off, x.begin() + off + n));
  };
  auto u = part(f, 0), v = part(f, n), u2 = part(g, 0), v2 = part(g, n);
  return inner(u, v2) - inner(v, u2) + inner(p.y, bracket(alg, v2, v));
}

}  // namespace

QuotientInvolution quotient_involution_check(int k, int points, std::uint64_t seed) {
  GraphAlgebra alg(generate_named("S", k));
  auto space = make_phase_space(alg);
  auto fam = quotient_family(space, k);
  const std::size_t n = fam.names.size();
  QuotientInvolution out;
  out.names = fam.names;
  out.residual.assign(n, std::vector<double>(n, 0.0));
  std::mt19937_64 rng(seed);
  for (int s = 0; s < points; ++s) {
    auto p = random_star_point(alg, rng);
    std::vector<std::vector<double>> g;
    for (const auto& fn : fam.grads) g.push_back(fn(p));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.residual[i][j] = std::max(out.residual[i][j], std::abs(float_bracket(alg, p, g[i], g[j])));
  }
  return out;
}

int float_rank(const std::vector<std::vector<double>>& rows, double rel_tol) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

int quotient_rank(int k, int points, std::uint64_t seed) {
  GraphAlgebra alg(generate_named("S", k));
  auto space = make_phase_space(alg);
  auto fam = quotient_family(space, k);
  std::mt19937_64 rng(seed);
  int lowest = static_cast<int>(fam.names.size());
  for (int s = 0; s < points; ++s) {
    auto p = random_star_point(alg, rng);
    std::vector<std::vector<double>> rows;
    for (const auto& fn : fam.grads) rows.push_back(fn(p));
    lowest = std::min(lowest, float_rank(rows));
  }
  return lowest;
}

double quotient_drift(int k, const GeodesicTrajectory& traj) {
  GraphAlgebra alg(generate_named("S", k));
  auto space = make_phase_space(alg);
  double worst = 0.0;
  for (int j = 1; j <= k; ++j) {
    SmoothQuotientIntegral f(space, j);
    const double f0 = f.value(traj.states.front());
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(f.value(s) - f0));
  }
  return worst;
}

}  // namespace nilgraph
