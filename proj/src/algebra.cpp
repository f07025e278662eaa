#include "nilgraph/algebra.hpp"

namespace nilgraph {

GraphAlgebra::GraphAlgebra(DirectedGraph g) : graph_(std::move(g)) {}

int GraphAlgebra::structure_constant(int k, int i, int j) const {
  const auto& e = graph_.edges().at(k);
  if (e.source == i && e.target == j) return 1;
  if (e.source == j && e.target == i) return -1;
  return 0;
}

AlgebraVector<Rational> GraphAlgebra::basis(int index) const {
  if (index < 0 || index >= dim()) throw AlgebraError("basis index out of range");
  AlgebraVector<Rational> out = zero(Rational(0));
  out[index] = 1;
  return out;
}

std::string GraphAlgebra::basis_name(int index) const {
  if (index < dim_v()) return "V" + std::to_string(index + 1);
  return "Z" + std::to_string(index - dim_v() + 1);
}

AlgebraVector<double> to_double(const AlgebraVector<Rational>& a) {
  AlgebraVector<double> out;
  for (const auto& x : a.v) out.v.push_back(x.get_d());
  for (const auto& x : a.z) out.z.push_back(x.get_d());
  return out;
}

}  // namespace nilgraph
