#pragma once

#include "nilgraph/algebra.hpp"
#include "nilgraph/exact_linalg.hpp"
#include "nilgraph/poly.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace nilgraph {

class IntegralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (W, Y): exponential coordinates W = log p of the base point and the velocity
/// Y in the left-invariant frame.
template <typename T>
struct TangentPoint {
  AlgebraVector<T> w;
  AlgebraVector<T> y;
};

/// Polynomial ring in w_1..w_n, y_1..y_n over one graph algebra.
class PhaseSpace {
 public:
  explicit PhaseSpace(GraphAlgebra alg);

  const GraphAlgebra& algebra() const { return alg_; }
  const VarsPtr& variables() const { return vars_; }
  int dim() const { return alg_.dim(); }

  Poly w(int i) const { return Poly::variable(vars_, i); }
  Poly y(int i) const { return Poly::variable(vars_, dim() + i); }
  const AlgebraVector<Poly>& W() const { return W_; }
  const AlgebraVector<Poly>& Y() const { return Y_; }
  Poly zero() const { return Poly::zero(vars_); }
  Poly constant(const Rational& c) const { return Poly::constant(vars_, c); }
  AlgebraVector<Poly> lift(const AlgebraVector<Rational>& x) const;

  /// Flat evaluation point [w..., y...].
  template <typename T>
  std::vector<T> point(const TangentPoint<T>& p) const {
    std::vector<T> out = flatten(p.w);
    auto y = flatten(p.y);
    out.insert(out.end(), y.begin(), y.end());
    return out;
  }

 private:
  GraphAlgebra alg_;
  VarsPtr vars_;
  AlgebraVector<Poly> W_;
  AlgebraVector<Poly> Y_;
};

using SpacePtr = std::shared_ptr<const PhaseSpace>;

SpacePtr make_phase_space(const GraphAlgebra& alg);

enum class Family { Energy, Center, Quadratic, Butler, Killing, K3Special, Custom };

std::string to_string(Family f);

/// A function on TN = N x n given as a polynomial in (w, y), with its gradient
/// (U, V) in the left-invariant frame. U is the base component, V the fiber one.
struct FirstIntegral {
  SpacePtr space;
  Family family = Family::Custom;
  std::string name;
  Poly value;
  AlgebraVector<Poly> grad_base;
  AlgebraVector<Poly> grad_fiber;
  std::map<std::string, std::string> metadata;
};

/// Builds the gradient of a polynomial by the left-frame chain rule:
/// V = d/dy F and U = d/dw F + (1/2) ad(W)^t d/dw F, which is exact because
/// log(p exp(sU')) = W + sU' + (s/2)[W, U'] in a 2-step group.
FirstIntegral from_polynomial(const SpacePtr& space, Family family, std::string name, Poly value);

FirstIntegral energy(const SpacePtr& space);

/// f(p, Y) = <Y, Z0>.
FirstIntegral center_integral(const SpacePtr& space, const std::vector<Rational>& z0);

/// Basis (reduced echelon form over the upper-triangular entries) of the
/// symmetric m x m matrices commuting with every j(Z_k).
std::vector<RationalMatrix> commutant_basis(const GraphAlgebra& alg);

/// g_A(p, Y) = <Y, AY>/2 for A = a_v (+) a_z. a_z defaults to zero; only the v-block
/// must commute with the j-maps.
FirstIntegral quadratic_integral(const SpacePtr& space, const RationalMatrix& a_v,
                                 std::optional<RationalMatrix> a_z = std::nullopt);

/// h_i(p, Y) = <Y_v, j(Y_z)^{2i} Y_v>, 1 <= i <= dim v / 2.
FirstIntegral butler_integral(const SpacePtr& space, int i);

/// Integral of the right-invariant (Killing) field through x:
/// f(p, Y) = <x + [x, W], Y>.
FirstIntegral killing_integral(const SpacePtr& space, const AlgebraVector<Rational>& x);

/// G = <Y,Z1><Y,V3> + <Y,Z2><Y,V1> + <Y,Z3><Y,V2> on the triangle algebra.
FirstIntegral k3_special_integral(const SpacePtr& space);

/// Caller-supplied value and gradient; the gradient is accepted only if it
/// passes the finite-difference check.
FirstIntegral custom_integral(const SpacePtr& space, std::string name, Poly value, AlgebraVector<Poly> grad_base,
                              AlgebraVector<Poly> grad_fiber, std::uint64_t seed = 0);

/// {f, g} = <U, V'> - <V, U'> + <Y, [V', V]>.
Poly poisson_bracket(const FirstIntegral& f, const FirstIntegral& g);

struct FirstIntegralCheck {
  bool holds = false;
  Poly residual;  ///< <Y, U> - <j(Y_z) V_v, Y_v>
};

FirstIntegralCheck is_first_integral(const FirstIntegral& f);

/// Hamiltonian field (V, ad^t(V) Y - U) at a point.
template <typename T>
std::pair<AlgebraVector<T>, AlgebraVector<T>> hamiltonian_field(const FirstIntegral& f, const TangentPoint<T>& at);

template <typename T>
T evaluate(const FirstIntegral& f, const TangentPoint<T>& at) {
  auto pt = f.space->point(at);
  return f.value.evaluate(std::span<const T>(pt));
}

/// Gradient (U, V) at a point, flattened to length 2n.
template <typename T>
std::vector<T> gradient_at(const FirstIntegral& f, const TangentPoint<T>& at);

/// Largest exact rank of the stacked gradients over seeded random rational points.
int gradient_rank(const std::vector<FirstIntegral>& set, int trials, std::uint64_t seed);

struct InvolutionTable {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> commute;
  std::vector<std::vector<int>> residual_degree;  ///< -1 where the bracket vanishes
  std::vector<std::vector<Poly>> brackets;
  bool all_commute() const;
};

InvolutionTable involution_table(const std::vector<FirstIntegral>& set);

/// Largest relative mismatch between a central finite difference of
/// s -> f(p exp(sU'), Y + sV') and <U, U'> + <V, V'> over random float points
/// and directions (relative to max(1, |analytic|)).
double gradient_fd_error(const FirstIntegral& f, int points, std::uint64_t seed);

/// Float evaluator compiled once for repeated use along trajectories.
class CompiledIntegral {
 public:
  explicit CompiledIntegral(const FirstIntegral& f);
  const std::string& name() const { return name_; }
  double value(const TangentPoint<double>& at) const;
  std::vector<double> gradient(const TangentPoint<double>& at) const;

 private:
  std::string name_;
  FloatPoly value_;
  std::vector<FloatPoly> grad_;
};

/// The explicit integral sets: S_k -> {E, f_Zj, f_Vj*}, P4 -> {E, h, f_Z1..3,
/// f_V1*, f_V4*}, K3 -> {E, f_Z1..3, G, f_V1*}. Returns nullopt for other graphs.
std::optional<std::vector<FirstIntegral>> known_integral_set(const SpacePtr& space);

struct Harvest {
  std::vector<FirstIntegral> integrals;
  int rank = 0;
};

/// Greedy selection: candidates in family order (energy, center, butler,
/// killing, quadratic, k3) are kept when they are certified first integrals,
/// commute with everything kept so far, and raise the generic gradient rank.
Harvest harvest_integrals(const SpacePtr& space, const std::set<Family>& families, int trials, std::uint64_t seed);

/// Noncommutative-integrability count for dim v = 2s, dim z = t: the n Killing
/// integrals together with h_1..h_s reach gradient rank n + s, and the s + t
/// invariant ones (f_Z and h_i) commute with the whole family.
struct NoncommutativeCount {
  int s = 0;
  int t = 0;
  int rank = 0;
  int expected_rank = 0;
  bool invariants_commute = false;
  bool met() const { return rank == expected_rank && invariants_commute; }
};

NoncommutativeCount noncommutative_count(const SpacePtr& space, int trials, std::uint64_t seed);

}  // namespace nilgraph
