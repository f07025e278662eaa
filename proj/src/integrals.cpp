#include "nilgraph/integrals.hpp"

#include "nilgraph/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nilgraph {

namespace {

int integral_degree_cap(const GraphAlgebra& alg) {
  const int imax = std::max(1, alg.dim_v() / 2);
  return 4 * imax + 4;
}

void same_space(const FirstIntegral& f, const FirstIntegral& g) {
  if (f.space != g.space && !(f.space->algebra() == g.space->algebra()))
    throw IntegralError("integrals live on different algebras");
  if (f.space->variables() != g.space->variables())
    throw IntegralError("integrals use different polynomial rings");
}

Poly adopt(const SpacePtr& space, Poly p) {
  if (!p.variables()) return space->constant(p.is_zero() ? Rational(0) : p.terms().begin()->second);
  if (p.variables() != space->variables()) throw IntegralError("polynomial belongs to another ring");
  return p;
}

std::optional<int> unit_index(const std::vector<Rational>& x) {
  std::optional<int> hit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if (x[i] != 1 || hit) return std::nullopt;
    hit = static_cast<int>(i);
  }
  return hit;
}

template <typename T>
AlgebraVector<T> eval_vec(const AlgebraVector<Poly>& p, std::span<const T> pt) {
  AlgebraVector<T> out;
  out.v.reserve(p.v.size());
  out.z.reserve(p.z.size());
  for (const auto& c : p.v) out.v.push_back(c.evaluate(pt));
  for (const auto& c : p.z) out.z.push_back(c.evaluate(pt));
  return out;
}

AlgebraVector<Rational> random_vec(const GraphAlgebra& alg, RationalSampler& rs) {
  AlgebraVector<Rational> x = alg.zero(Rational(0));
  for (int i = 0; i < alg.dim(); ++i) x[i] = rs();
  return x;
}

bool is_known(const DirectedGraph& g, std::string_view name) {
  try {
    return g == generate_named(name);
  } catch (const GraphError&) {
    return false;
  }
}

}  // namespace

PhaseSpace::PhaseSpace(GraphAlgebra alg) : alg_(std::move(alg)) {
  std::vector<std::string> names;
  for (int i = 1; i <= alg_.dim(); ++i) names.push_back("w" + std::to_string(i));
  for (int i = 1; i <= alg_.dim(); ++i) names.push_back("y" + std::to_string(i));
  vars_ = make_variables(std::move(names), integral_degree_cap(alg_));
  W_ = alg_.zero(zero());
  Y_ = alg_.zero(zero());
  for (int i = 0; i < alg_.dim(); ++i) {
    W_[i] = w(i);
    Y_[i] = y(i);
  }
}

AlgebraVector<Poly> PhaseSpace::lift(const AlgebraVector<Rational>& x) const {
  alg_.check(x);
  AlgebraVector<Poly> out = alg_.zero(zero());
  for (int i = 0; i < dim(); ++i) out[i] = constant(x[i]);
  return out;
}

SpacePtr make_phase_space(const GraphAlgebra& alg) { return std::make_shared<const PhaseSpace>(alg); }

std::string to_string(Family f) {
  switch (f) {
    case Family::Energy: return "energy";
    case Family::Center: return "center";
    case Family::Quadratic: return "quadratic";
    case Family::Butler: return "butler";
    case Family::Killing: return "killing";
    case Family::K3Special: return "k3";
    case Family::Custom: return "custom";
  }
  return "custom";
}

FirstIntegral from_polynomial(const SpacePtr& space, Family family, std::string name, Poly value) {
  value = adopt(space, std::move(value));
  const auto& alg = space->algebra();
  const int n = space->dim();
  AlgebraVector<Poly> dw = alg.zero(space->zero());
  AlgebraVector<Poly> dy = alg.zero(space->zero());
  for (int i = 0; i < n; ++i) {
    dw[i] = value.partial(static_cast<std::size_t>(i));
    dy[i] = value.partial(static_cast<std::size_t>(n + i));
  }
  AlgebraVector<Poly> corr = ad_transpose_apply(alg, space->W(), dw);
  FirstIntegral f;
  f.space = space;
  f.family = family;
  f.name = std::move(name);
  f.value = std::move(value);
  f.grad_base = dw + scaled(Poly(Rational(1, 2)), corr);
  f.grad_fiber = std::move(dy);
  return f;
}

FirstIntegral energy(const SpacePtr& space) {
  Poly e = space->zero();
  for (int i = 0; i < space->dim(); ++i) e += space->y(i) * space->y(i);
  return from_polynomial(space, Family::Energy, "E", Poly(Rational(1, 2)) * e);
}

FirstIntegral center_integral(const SpacePtr& space, const std::vector<Rational>& z0) {
  const auto& alg = space->algebra();
  if (static_cast<int>(z0.size()) != alg.dim_z()) throw IntegralError("center vector has wrong length");
  if (std::all_of(z0.begin(), z0.end(), [](const Rational& c) { return c == 0; }))
    throw IntegralError("center integral needs a nonzero center vector");
  Poly p = space->zero();
  for (int k = 0; k < alg.dim_z(); ++k)
    if (z0[k] != 0) p += Poly(z0[k]) * space->y(alg.dim_v() + k);
  auto u = unit_index(z0);
  std::string name = u ? "f_Z" + std::to_string(*u + 1) : "f_Z0";
  FirstIntegral f = from_polynomial(space, Family::Center, name, p);
  std::string zs;
  for (const auto& c : z0) zs += (zs.empty() ? "" : ",") + to_string(c);
  f.metadata["z0"] = zs;
  return f;
}

std::vector<RationalMatrix> commutant_basis(const GraphAlgebra& alg) {
  const int m = alg.dim_v();
  std::vector<std::vector<int>> idx(m, std::vector<int>(m));
  int unknowns = 0;
  for (int p = 0; p < m; ++p)
    for (int q = p; q < m; ++q) idx[p][q] = idx[q][p] = unknowns++;

  std::vector<RationalVector> eqs;
  for (int k = 0; k < alg.dim_z(); ++k) {
    RationalMatrix j = j_matrix(alg, alg.center(k).z);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        // (A J - J A)(r, c)
        RationalVector row(unknowns, Rational(0));
        for (int s = 0; s < m; ++s) {
          row[idx[r][s]] += j(s, c);
          row[idx[s][c]] -= j(r, s);
        }
        if (std::any_of(row.begin(), row.end(), [](const Rational& x) { return x != 0; }))
          eqs.push_back(std::move(row));
      }
  }
  std::vector<RationalVector> null;
  if (eqs.empty()) {
    for (int u = 0; u < unknowns; ++u) {
      RationalVector e(unknowns, Rational(0));
      e[u] = 1;
      null.push_back(e);
    }
  } else {
    RationalMatrix sys(eqs.size(), unknowns, Rational(0));
    for (std::size_t r = 0; r < eqs.size(); ++r)
      for (int c = 0; c < unknowns; ++c) sys(r, c) = eqs[r][c];
    null = nullspace(sys);
  }
  std::vector<RationalMatrix> out;
  for (const auto& vec : row_reduce_basis(null)) {
    RationalMatrix a(m, m, Rational(0));
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) a(p, q) = vec[idx[p][q]];
    out.push_back(std::move(a));
  }
  return out;
}

FirstIntegral quadratic_integral(const SpacePtr& space, const RationalMatrix& a_v, std::optional<RationalMatrix> a_z) {
  const auto& alg = space->algebra();
  const std::size_t m = alg.dim_v(), q = alg.dim_z();
  if (a_v.rows() != m || a_v.cols() != m) throw IntegralError("v-block must be " + std::to_string(m) + "x" + std::to_string(m));
  if (!(a_v.transpose() == a_v)) throw IntegralError("v-block is not symmetric");
  RationalMatrix az = a_z ? *a_z : RationalMatrix(q, q, Rational(0));
  if (az.rows() != q || az.cols() != q) throw IntegralError("z-block must be " + std::to_string(q) + "x" + std::to_string(q));
  if (!(az.transpose() == az)) throw IntegralError("z-block is not symmetric");
  for (std::size_t k = 0; k < q; ++k) {
    RationalMatrix j = j_matrix(alg, alg.center(static_cast<int>(k)).z);
    if (!(multiply(a_v, j, Rational(0)) == multiply(j, a_v, Rational(0))))
      throw IntegralError("v-block does not commute with j(" + alg.basis_name(static_cast<int>(m + k)) + ")");
  }
  Poly p = space->zero();
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      if (a_v(r, c) != 0) p += Poly(a_v(r, c)) * space->y(r) * space->y(c);
  for (std::size_t r = 0; r < q; ++r)
    for (std::size_t c = 0; c < q; ++c)
      if (az(r, c) != 0) p += Poly(az(r, c)) * space->y(m + r) * space->y(m + c);
  return from_polynomial(space, Family::Quadratic, "g_A", Poly(Rational(1, 2)) * p);
}

FirstIntegral butler_integral(const SpacePtr& space, int i) {
  const auto& alg = space->algebra();
  if (i < 1 || i > alg.dim_v() / 2)
    throw IntegralError("butler index must lie in 1.." + std::to_string(alg.dim_v() / 2));
  // j applied i times to a vector; cheaper than forming j^2i
  DenseMatrix<Poly> j = j_map(alg, space->Y().z);
  std::vector<Poly> u = space->Y().v;
  for (int s = 0; s < i; ++s) u = apply(j, u, space->zero());
  Poly sq = space->zero();
  for (const auto& c : u) sq += c * c;
  if (i % 2 == 1) sq = -sq;
  FirstIntegral f = from_polynomial(space, Family::Butler, "h" + std::to_string(i), sq);
  f.metadata["index"] = std::to_string(i);
  return f;
}

FirstIntegral killing_integral(const SpacePtr& space, const AlgebraVector<Rational>& x) {
  const auto& alg = space->algebra();
  AlgebraVector<Poly> xp = space->lift(x);
  Poly p = inner(xp + bracket(alg, xp, space->W()), space->Y());
  auto u = unit_index(flatten(x));
  std::string name = u ? "f_" + alg.basis_name(*u) + "*" : "f_X*";
  FirstIntegral f = from_polynomial(space, Family::Killing, name, p);
  std::string xs;
  for (const auto& c : flatten(x)) xs += (xs.empty() ? "" : ",") + to_string(c);
  f.metadata["x"] = xs;
  return f;
}

FirstIntegral k3_special_integral(const SpacePtr& space) {
  if (!is_known(space->algebra().graph(), "K3"))
    throw IntegralError("the G integral is defined only for the canonical triangle (edges 1->2, 2->3, 3->1)");
  Poly g = space->y(3) * space->y(2) + space->y(4) * space->y(0) + space->y(5) * space->y(1);
  return from_polynomial(space, Family::K3Special, "G", g);
}

FirstIntegral custom_integral(const SpacePtr& space, std::string name, Poly value, AlgebraVector<Poly> grad_base,
                              AlgebraVector<Poly> grad_fiber, std::uint64_t seed) {
  const auto& alg = space->algebra();
  alg.check(grad_base);
  alg.check(grad_fiber);
  FirstIntegral f;
  f.space = space;
  f.family = Family::Custom;
  f.name = std::move(name);
  f.value = adopt(space, std::move(value));
  for (int i = 0; i < alg.dim(); ++i) {
    grad_base[i] = adopt(space, grad_base[i]);
    grad_fiber[i] = adopt(space, grad_fiber[i]);
  }
  f.grad_base = std::move(grad_base);
  f.grad_fiber = std::move(grad_fiber);
  const double err = gradient_fd_error(f, 8, seed);
  if (!(err <= 1e-6))
    throw IntegralError("supplied gradient of " + f.name + " fails the finite-difference check (error " +
                        std::to_string(err) + ")");
  return f;
}

Poly poisson_bracket(const FirstIntegral& f, const FirstIntegral& g) {
  same_space(f, g);
  const auto& alg = f.space->algebra();
  return inner(f.grad_base, g.grad_fiber) - inner(f.grad_fiber, g.grad_base) +
         inner(f.space->Y(), bracket(alg, g.grad_fiber, f.grad_fiber));
}

FirstIntegralCheck is_first_integral(const FirstIntegral& f) {
  const auto& alg = f.space->algebra();
  const auto& y = f.space->Y();
  FirstIntegralCheck out;
  out.residual = inner(y, f.grad_base) - inner(ad_transpose_apply(alg, f.grad_fiber, y), y);
  out.holds = out.residual.is_zero();
  return out;
}

template <typename T>
std::pair<AlgebraVector<T>, AlgebraVector<T>> hamiltonian_field(const FirstIntegral& f, const TangentPoint<T>& at) {
  const auto& alg = f.space->algebra();
  alg.check(at.w);
  alg.check(at.y);
  auto pt = f.space->point(at);
  std::span<const T> sp(pt);
  AlgebraVector<T> u = eval_vec<T>(f.grad_base, sp);
  AlgebraVector<T> v = eval_vec<T>(f.grad_fiber, sp);
  AlgebraVector<T> dy = ad_transpose_apply(alg, v, at.y) - u;
  return {std::move(v), std::move(dy)};
}

template std::pair<AlgebraVector<double>, AlgebraVector<double>> hamiltonian_field(const FirstIntegral&,
                                                                                   const TangentPoint<double>&);
template std::pair<AlgebraVector<Rational>, AlgebraVector<Rational>> hamiltonian_field(const FirstIntegral&,
                                                                                       const TangentPoint<Rational>&);

template <typename T>
std::vector<T> gradient_at(const FirstIntegral& f, const TangentPoint<T>& at) {
  auto pt = f.space->point(at);
  std::span<const T> sp(pt);
  std::vector<T> out = flatten(eval_vec<T>(f.grad_base, sp));
  auto v = flatten(eval_vec<T>(f.grad_fiber, sp));
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

template std::vector<double> gradient_at(const FirstIntegral&, const TangentPoint<double>&);
template std::vector<Rational> gradient_at(const FirstIntegral&, const TangentPoint<Rational>&);

int gradient_rank(const std::vector<FirstIntegral>& set, int trials, std::uint64_t seed) {
  if (set.empty()) return 0;
  for (const auto& f : set) same_space(set.front(), f);
  const auto& alg = set.front().space->algebra();
  RationalSampler rs(seed);
  std::size_t best = 0;
  for (int t = 0; t < std::max(1, trials); ++t) {
    TangentPoint<Rational> p{random_vec(alg, rs), random_vec(alg, rs)};
    RationalMatrix m(set.size(), 2 * alg.dim(), Rational(0));
    for (std::size_t r = 0; r < set.size(); ++r) {
      auto g = gradient_at(set[r], p);
      for (std::size_t c = 0; c < g.size(); ++c) m(r, c) = g[c];
    }
    best = std::max(best, rank(m));
    if (best == set.size()) break;
  }
  return static_cast<int>(best);
}

bool InvolutionTable::all_commute() const {
  for (const auto& row : commute)
    for (bool b : row)
      if (!b) return false;
  return true;
}

InvolutionTable involution_table(const std::vector<FirstIntegral>& set) {
  const std::size_t n = set.size();
  InvolutionTable t;
  t.commute.assign(n, std::vector<bool>(n, true));
  t.residual_degree.assign(n, std::vector<int>(n, -1));
  t.brackets.assign(n, std::vector<Poly>(n));
  for (const auto& f : set) t.names.push_back(f.name);
  for (std::size_t i = 0; i < n; ++i) {
    t.brackets[i][i] = set[i].space->zero();
    for (std::size_t j = i + 1; j < n; ++j) {
      Poly b = poisson_bracket(set[i], set[j]);
      t.commute[i][j] = t.commute[j][i] = b.is_zero();
      t.residual_degree[i][j] = t.residual_degree[j][i] = b.degree();
      t.brackets[j][i] = -b;
      t.brackets[i][j] = std::move(b);
    }
  }
  return t;
}

double gradient_fd_error(const FirstIntegral& f, int points, std::uint64_t seed) {
  const auto& alg = f.space->algebra();
  CompiledIntegral c(f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto rnd = [&] {
    AlgebraVector<double> x = alg.zero(0.0);
    for (int i = 0; i < alg.dim(); ++i) x[i] = uni(rng);
    return x;
  };
  const double h = 1e-3;
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    TangentPoint<double> at{rnd(), rnd()};
    AlgebraVector<double> du = rnd(), dv = rnd();
    auto phi = [&](double s) {
      return c.value({group_product(alg, at.w, scaled(s, du)), at.y + scaled(s, dv)});
    };
    const double fd = (-phi(2 * h) + 8 * phi(h) - 8 * phi(-h) + phi(-2 * h)) / (12 * h);
    auto g = c.gradient(at);
    double an = 0.0;
    auto fu = flatten(du), fv = flatten(dv);
    for (int i = 0; i < alg.dim(); ++i) an += g[i] * fu[i] + g[alg.dim() + i] * fv[i];
    worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  return worst;
}

CompiledIntegral::CompiledIntegral(const FirstIntegral& f) : name_(f.name), value_(f.value) {
  for (const auto& p : flatten(f.grad_base)) grad_.emplace_back(p);
  for (const auto& p : flatten(f.grad_fiber)) grad_.emplace_back(p);
}

double CompiledIntegral::value(const TangentPoint<double>& at) const {
  std::vector<double> pt = flatten(at.w);
  auto y = flatten(at.y);
  pt.insert(pt.end(), y.begin(), y.end());
  return value_(pt);
}

std::vector<double> CompiledIntegral::gradient(const TangentPoint<double>& at) const {
  std::vector<double> pt = flatten(at.w);
  auto y = flatten(at.y);
  pt.insert(pt.end(), y.begin(), y.end());
  std::vector<double> out;
  out.reserve(grad_.size());
  for (const auto& g : grad_) out.push_back(g(pt));
  return out;
}

std::optional<std::vector<FirstIntegral>> known_integral_set(const SpacePtr& space) {
  const auto& alg = space->algebra();
  const auto& g = alg.graph();
  std::vector<FirstIntegral> out{energy(space)};
  auto centers = [&] {
    for (int k = 0; k < alg.dim_z(); ++k) out.push_back(center_integral(space, alg.center(k).z));
  };
  if (g.vertex_count() >= 2 && g == generate_named("S", g.vertex_count() - 1)) {
    centers();
    for (int j = 1; j < alg.dim_v(); ++j) out.push_back(killing_integral(space, alg.vertex(j)));
    return out;
  }
  if (is_known(g, "P4")) {
    out.push_back(butler_integral(space, 1));
    out.back().name = "h";
    centers();
    out.push_back(killing_integral(space, alg.vertex(0)));
    out.push_back(killing_integral(space, alg.vertex(3)));
    return out;
  }
  if (is_known(g, "K3")) {
    centers();
    out.push_back(k3_special_integral(space));
    out.push_back(killing_integral(space, alg.vertex(0)));
    return out;
  }
  return std::nullopt;
}

Harvest harvest_integrals(const SpacePtr& space, const std::set<Family>& families, int trials, std::uint64_t seed) {
  const auto& alg = space->algebra();
  std::vector<FirstIntegral> cands;
  auto want = [&](Family f) { return families.empty() || families.count(f) > 0; };
  if (want(Family::Energy)) cands.push_back(energy(space));
  if (want(Family::Center))
    for (int k = 0; k < alg.dim_z(); ++k) cands.push_back(center_integral(space, alg.center(k).z));
  if (want(Family::Butler))
    for (int i = 1; i <= alg.dim_v() / 2; ++i) cands.push_back(butler_integral(space, i));
  if (want(Family::Killing))
    for (int i = 0; i < alg.dim_v(); ++i) cands.push_back(killing_integral(space, alg.vertex(i)));
  if (want(Family::Quadratic)) {
    int idx = 0;
    for (const auto& a : commutant_basis(alg)) {
      cands.push_back(quadratic_integral(space, a));
      cands.back().name = "g_A" + std::to_string(++idx);
    }
  }
  if (want(Family::K3Special) && is_known(alg.graph(), "K3")) cands.push_back(k3_special_integral(space));

  Harvest h;
  for (auto& c : cands) {
    if (!is_first_integral(c).holds) continue;
    bool ok = true;
    for (const auto& k : h.integrals)
      if (!poisson_bracket(k, c).is_zero()) {
        ok = false;
        break;
      }
    if (!ok) continue;
    h.integrals.push_back(c);
    const int r = gradient_rank(h.integrals, trials, seed);
    if (r > h.rank)
      h.rank = r;
    else
      h.integrals.pop_back();
  }
  return h;
}

NoncommutativeCount noncommutative_count(const SpacePtr& space, int trials, std::uint64_t seed) {
  const auto& alg = space->algebra();
  NoncommutativeCount out;
  out.s = alg.dim_v() / 2;
  out.t = alg.dim_z();
  std::vector<FirstIntegral> all;
  std::vector<FirstIntegral> inv;
  for (int i = 0; i < alg.dim(); ++i) {
    all.push_back(killing_integral(space, alg.basis(i)));
    if (i >= alg.dim_v()) inv.push_back(all.back());
  }
  for (int i = 1; i <= out.s; ++i) {
    all.push_back(butler_integral(space, i));
    inv.push_back(all.back());
  }
  out.rank = gradient_rank(all, trials, seed);
  out.expected_rank = alg.dim() + out.s;
  out.invariants_commute = true;
  for (const auto& a : inv) {
    for (const auto& b : all)
      if (!poisson_bracket(a, b).is_zero()) {
        out.invariants_commute = false;
        break;
      }
    if (!out.invariants_commute) break;
  }
  return out;
}

}  // namespace nilgraph
