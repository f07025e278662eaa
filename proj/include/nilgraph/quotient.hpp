#pragma once

#include "nilgraph/flow.hpp"
#include "nilgraph/integrals.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilgraph {

class QuotientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice r m0 Z x 2r_1 Z x ... x 2r_k Z x m_1 Z x ... x m_k Z in the star group,
/// m0 = m_1 ... m_k. Coordinates are (x_0, x_1..x_k, z_1..z_k), which are also the
/// exponential coordinates of the canonical star algebra.
class StarLattice {
 public:
  StarLattice(int k, long r, std::vector<long> r_vec, std::vector<long> m_vec);

  int k() const { return k_; }
  long r() const { return r_; }
  const std::vector<long>& r_vec() const { return r_vec_; }
  const std::vector<long>& m_vec() const { return m_vec_; }
  const GraphAlgebra& algebra() const { return alg_; }

  /// Factor of each coordinate, length 2k + 1.
  const std::vector<long>& factors() const { return factors_; }

  bool contains(const AlgebraVector<Rational>& g) const;
  /// sum of multipliers[i] * factors[i] along coordinate i.
  AlgebraVector<Rational> element(const std::vector<long>& multipliers) const;
  std::vector<AlgebraVector<Rational>> generators() const;
  AlgebraVector<Rational> random_element(std::mt19937_64& rng, int bound = 3) const;

 private:
  int k_;
  long r_;
  std::vector<long> r_vec_;
  std::vector<long> m_vec_;
  std::vector<long> factors_;
  GraphAlgebra alg_;
};

struct ClosureReport {
  int products_checked = 0;
  bool closed = false;
};

/// Products (and inverses) of random pairs of signed generators and of random
/// lattice elements stay in the lattice. Exact arithmetic.
ClosureReport lattice_closure_check(const StarLattice& lattice, int pairs, std::uint64_t seed);

/// True iff the base gradient vanishes identically, so f depends on Y only.
bool invariant_descent_check(const FirstIntegral& f);

/// f_{V_j*}(qp, Y) - f_{V_j*}(p, Y) is an integer multiple of f_{Z_j}(p, Y) on
/// exact rational samples (nonzero f_{Z_j}), for every j.
bool mod_relation_check(const StarLattice& lattice, int samples, std::uint64_t seed);

/// F_j = exp(-1/b^2) sin(2 pi a / b) with a = f_{V_j*}, b = f_{Z_j}; 0 where b = 0.
class SmoothQuotientIntegral {
 public:
  SmoothQuotientIntegral(const SpacePtr& space, int j);
  const std::string& name() const { return name_; }
  int index() const { return j_; }
  double value(const TangentPoint<double>& at) const;
  /// (U, V) flattened, from the chain rule through a and b.
  std::vector<double> gradient(const TangentPoint<double>& at) const;

 private:
  int j_;
  std::string name_;
  CompiledIntegral a_;
  CompiledIntegral b_;
};

/// max |F_j(qp, Y) - F_j(p, Y)| over random lattice elements q, random points
/// with |f_{Z_j}| >= 1/2, and all j.
double invariance_residual(const StarLattice& lattice, int samples, std::uint64_t seed);

struct QuotientInvolution {
  std::vector<std::string> names;
  std::vector<std::vector<double>> residual;  ///< max |bracket| over the sampled points
  double max_residual() const;
};

/// Float brackets of {E, f_{Z_i}, F_i} at random points with |f_{Z_j}| in [1/2, 3/2].
QuotientInvolution quotient_involution_check(int k, int points, std::uint64_t seed);

/// Numerical rank with singular values below rel_tol * sigma_max treated as zero.
int float_rank(const std::vector<std::vector<double>>& rows, double rel_tol = 1e-8);

/// Smallest float rank of the gradients of {E, f_{Z_i}, F_i} over random points
/// with every f_{Z_j} bounded away from zero.
int quotient_rank(int k, int points, std::uint64_t seed);

/// max_t |F_j(state_t) - F_j(state_0)| over all j.
double quotient_drift(int k, const GeodesicTrajectory& traj);

/// Random float point on T N with every center coordinate of Y in +-[lo, hi].
TangentPoint<double> random_star_point(const GraphAlgebra& alg, std::mt19937_64& rng, double lo = 0.5,
                                       double hi = 1.5);

}  // namespace nilgraph
