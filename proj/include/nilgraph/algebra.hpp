#pragma once

#include "nilgraph/graph.hpp"
#include "nilgraph/matrix.hpp"
#include "nilgraph/poly.hpp"
#include "nilgraph/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nilgraph {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element of n = v (+) z in the orthonormal graph basis: vertex coordinates
/// first, then edge coordinates. The scalar type fixes the kind (Rational,
/// double, or Poly for symbolic work); kinds only meet through explicit conversion.
template <typename T>
struct AlgebraVector {
  std::vector<T> v;
  std::vector<T> z;

  std::size_t size() const { return v.size() + z.size(); }
  T& operator[](std::size_t i) { return i < v.size() ? v[i] : z[i - v.size()]; }
  const T& operator[](std::size_t i) const { return i < v.size() ? v[i] : z[i - v.size()]; }

  bool operator==(const AlgebraVector&) const = default;
};

/// Additive identity carrying the same context as `like` (the variable set, for Poly).
inline double zero_like(double) { return 0.0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Poly zero_like(const Poly& p) { return p.variables() ? Poly::zero(p.variables()) : Poly(); }

template <typename T>
T half_of(const T& x) {
  if constexpr (std::is_same_v<T, double>)
    return 0.5 * x;
  else if constexpr (std::is_same_v<T, Rational>)
    return x / 2;
  else
    return Poly(Rational(1, 2)) * x;
}

/// The 2-step nilpotent metric Lie algebra of a directed graph: one orthonormal
/// basis vector per vertex (spanning v) and per edge (spanning the center z);
/// an edge Z_k from vertex i to vertex l gives [V_i, V_l] = Z_k.
class GraphAlgebra {
 public:
  explicit GraphAlgebra(DirectedGraph g);

  const DirectedGraph& graph() const { return graph_; }
  int dim_v() const { return graph_.vertex_count(); }
  int dim_z() const { return graph_.edge_count(); }
  int dim() const { return dim_v() + dim_z(); }

  /// Coefficient of Z_k in [V_i, V_j]: +1, -1 or 0.
  int structure_constant(int k, int i, int j) const;

  /// Basis element by flat index (vertices first, then edges).
  AlgebraVector<Rational> basis(int index) const;
  AlgebraVector<Rational> vertex(int i) const { return basis(i); }
  AlgebraVector<Rational> center(int k) const { return basis(dim_v() + k); }
  /// "V1".."Vm", "Z1".."Zq" (1-based labels).
  std::string basis_name(int index) const;

  template <typename T>
  AlgebraVector<T> zero(const T& like) const {
    return {std::vector<T>(dim_v(), zero_like(like)), std::vector<T>(dim_z(), zero_like(like))};
  }

  template <typename T>
  void check(const AlgebraVector<T>& x) const {
    if (static_cast<int>(x.v.size()) != dim_v() || static_cast<int>(x.z.size()) != dim_z())
      throw AlgebraError("vector does not belong to this algebra");
  }

  bool operator==(const GraphAlgebra& o) const { return graph_ == o.graph_; }

 private:
  DirectedGraph graph_;
};

template <typename T>
AlgebraVector<T> operator+(AlgebraVector<T> a, const AlgebraVector<T>& b) {
  if (a.v.size() != b.v.size() || a.z.size() != b.z.size()) throw AlgebraError("algebra mismatch");
  for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
  for (std::size_t i = 0; i < a.z.size(); ++i) a.z[i] += b.z[i];
  return a;
}

template <typename T>
AlgebraVector<T> operator-(AlgebraVector<T> a, const AlgebraVector<T>& b) {
  if (a.v.size() != b.v.size() || a.z.size() != b.z.size()) throw AlgebraError("algebra mismatch");
  for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] -= b.v[i];
  for (std::size_t i = 0; i < a.z.size(); ++i) a.z[i] -= b.z[i];
  return a;
}

template <typename T>
AlgebraVector<T> operator-(AlgebraVector<T> a) {
  for (auto& x : a.v) x = -x;
  for (auto& x : a.z) x = -x;
  return a;
}

template <typename T>
AlgebraVector<T> scaled(const T& s, AlgebraVector<T> a) {
  for (auto& x : a.v) x = s * x;
  for (auto& x : a.z) x = s * x;
  return a;
}

template <typename T>
T inner(const AlgebraVector<T>& a, const AlgebraVector<T>& b) {
  if (a.v.size() != b.v.size() || a.z.size() != b.z.size()) throw AlgebraError("algebra mismatch");
  T sum = zero_like(a.v.front());
  for (std::size_t i = 0; i < a.v.size(); ++i) sum += a.v[i] * b.v[i];
  for (std::size_t i = 0; i < a.z.size(); ++i) sum += a.z[i] * b.z[i];
  return sum;
}

template <typename T>
std::vector<T> flatten(const AlgebraVector<T>& a) {
  std::vector<T> out = a.v;
  out.insert(out.end(), a.z.begin(), a.z.end());
  return out;
}

template <typename T>
AlgebraVector<T> unflatten(const GraphAlgebra& alg, const std::vector<T>& flat) {
  if (static_cast<int>(flat.size()) != alg.dim()) throw AlgebraError("flat vector has wrong length");
  return {std::vector<T>(flat.begin(), flat.begin() + alg.dim_v()),
          std::vector<T>(flat.begin() + alg.dim_v(), flat.end())};
}

AlgebraVector<double> to_double(const AlgebraVector<Rational>& a);

/// [x, y]; lands in z. Only the v-parts contribute (2-step).
template <typename T>
AlgebraVector<T> bracket(const GraphAlgebra& alg, const AlgebraVector<T>& x, const AlgebraVector<T>& y) {
  alg.check(x);
  alg.check(y);
  AlgebraVector<T> out = alg.zero(x.v.front());
  const auto& edges = alg.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const int i = edges[k].source, l = edges[k].target;
    out.z[k] = x.v[i] * y.v[l] - x.v[l] * y.v[i];
  }
  return out;
}

/// Matrix of j(Z) on v, defined by <j(Z)U, V> = <[U, V], Z>: entry (l, i) is
/// <[V_i, V_l], Z>, so an edge Z_k from i to l sends V_i to V_l.
template <typename T>
DenseMatrix<T> j_map(const GraphAlgebra& alg, const std::vector<T>& z) {
  if (static_cast<int>(z.size()) != alg.dim_z()) throw AlgebraError("j_map: center vector has wrong length");
  T zero = zero_like(z.front());
  DenseMatrix<T> j(alg.dim_v(), alg.dim_v(), zero);
  const auto& edges = alg.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const int i = edges[k].source, l = edges[k].target;
    j(l, i) += z[k];
    j(i, l) -= z[k];
  }
  return j;
}

/// ad(v)^t y = j(y_z) v_v, placed in v.
template <typename T>
AlgebraVector<T> ad_transpose_apply(const GraphAlgebra& alg, const AlgebraVector<T>& v, const AlgebraVector<T>& y) {
  alg.check(v);
  alg.check(y);
  AlgebraVector<T> out = alg.zero(v.v.front());
  out.v = apply(j_map(alg, y.z), v.v, zero_like(v.v.front()));
  return out;
}

/// Group law in exponential coordinates: log(exp(a) exp(b)) = a + b + [a, b]/2.
template <typename T>
AlgebraVector<T> group_product(const GraphAlgebra& alg, const AlgebraVector<T>& a, const AlgebraVector<T>& b) {
  AlgebraVector<T> br = bracket(alg, a, b);
  AlgebraVector<T> out = a + b;
  for (std::size_t k = 0; k < out.z.size(); ++k) out.z[k] += half_of(br.z[k]);
  return out;
}

}  // namespace nilgraph
