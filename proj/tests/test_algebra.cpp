#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilgraph/algebra.hpp"
#include "nilgraph/classifier.hpp"

#include <random>

using namespace nilgraph;

namespace {

AlgebraVector<Rational> random_vec(const GraphAlgebra& alg, RationalSampler& rs) {
  AlgebraVector<Rational> x = alg.zero(Rational(0));
  for (int i = 0; i < alg.dim(); ++i) x[i] = rs();
  return x;
}

// Bracket expanded from the structure constants alone.
AlgebraVector<Rational> bracket_from_constants(const GraphAlgebra& alg, const AlgebraVector<Rational>& x,
                                               const AlgebraVector<Rational>& y) {
  AlgebraVector<Rational> out = alg.zero(Rational(0));
  for (int k = 0; k < alg.dim_z(); ++k)
    for (int i = 0; i < alg.dim_v(); ++i)
      for (int j = 0; j < alg.dim_v(); ++j) out.z[k] += alg.structure_constant(k, i, j) * x.v[i] * y.v[j];
  return out;
}

const char* kGraphs[] = {"K2", "K3", "K4", "K5", "S1", "S3", "P4", "C4", "C5", "G1", "G2"};

}  // namespace

TEST_CASE("structure constants follow edge orientation") {
  GraphAlgebra k3(generate_named("K3"));
  CHECK(k3.dim_v() == 3);
  CHECK(k3.dim_z() == 3);
  CHECK(k3.structure_constant(0, 0, 1) == 1);
  CHECK(k3.structure_constant(0, 1, 0) == -1);
  CHECK(k3.structure_constant(2, 2, 0) == 1);  // [V3, V1] = Z3
  CHECK(k3.structure_constant(2, 0, 2) == -1);
  CHECK(k3.structure_constant(1, 0, 1) == 0);
  CHECK(k3.basis_name(0) == "V1");
  CHECK(k3.basis_name(3) == "Z1");
}

TEST_CASE("basis brackets: [V_i, V_l] = Z_k for edge k from i to l, everything else central") {
  for (const char* n : kGraphs) {
    GraphAlgebra alg(generate_named(n));
    const auto& edges = alg.graph().edges();
    for (int a = 0; a < alg.dim(); ++a)
      for (int b = 0; b < alg.dim(); ++b) {
        auto br = bracket(alg, alg.basis(a), alg.basis(b));
        AlgebraVector<Rational> expected = alg.zero(Rational(0));
        for (std::size_t k = 0; k < edges.size(); ++k) {
          if (edges[k].source == a && edges[k].target == b) expected.z[k] = 1;
          if (edges[k].source == b && edges[k].target == a) expected.z[k] = -1;
        }
        CHECK(br == expected);
      }
  }
}

TEST_CASE("bracket properties on random vectors") {
  RationalSampler rs(11);
  for (const char* n : kGraphs) {
    GraphAlgebra alg(generate_named(n));
    for (int trial = 0; trial < 5; ++trial) {
      auto x = random_vec(alg, rs), y = random_vec(alg, rs), w = random_vec(alg, rs);
      auto xy = bracket(alg, x, y);
      CHECK(xy == -bracket(alg, y, x));
      CHECK(xy == bracket_from_constants(alg, x, y));
      // 2-step: brackets are central
      CHECK(bracket(alg, xy, w) == alg.zero(Rational(0)));
      for (const auto& c : xy.v) CHECK(c == 0);
      // bilinearity
      CHECK(bracket(alg, x + w, y) == xy + bracket(alg, w, y));
    }
  }
}

TEST_CASE("j-map is skew and represents the bracket") {
  RationalSampler rs(12);
  for (const char* n : kGraphs) {
    GraphAlgebra alg(generate_named(n));
    for (int trial = 0; trial < 5; ++trial) {
      auto u = random_vec(alg, rs), v = random_vec(alg, rs), z = random_vec(alg, rs);
      RationalMatrix j = j_map(alg, z.z);
      CHECK(j.transpose() == [&] {
        RationalMatrix neg = j;
        for (std::size_t r = 0; r < neg.rows(); ++r)
          for (std::size_t c = 0; c < neg.cols(); ++c) neg(r, c) = -neg(r, c);
        return neg;
      }());
      // <j(Z)U, V> = <[U, V], Z>
      auto ju = apply(j, u.v, Rational(0));
      Rational lhs = 0;
      for (int i = 0; i < alg.dim_v(); ++i) lhs += ju[i] * v.v[i];
      Rational rhs = 0;
      auto br = bracket(alg, u, v);
      for (int k = 0; k < alg.dim_z(); ++k) rhs += br.z[k] * z.z[k];
      CHECK(lhs == rhs);
      // ad^t(u) y = j(y_z) u_v, so <ad^t(u) y, x> = <y, [u, x]>
      auto x = random_vec(alg, rs);
      CHECK(inner(ad_transpose_apply(alg, u, z), x) == inner(z, bracket(alg, u, x)));
    }
  }
}

TEST_CASE("group product: identity, inverse, associativity, BCH") {
  RationalSampler rs(13);
  for (const char* n : kGraphs) {
    GraphAlgebra alg(generate_named(n));
    auto zero = alg.zero(Rational(0));
    for (int trial = 0; trial < 5; ++trial) {
      auto a = random_vec(alg, rs), b = random_vec(alg, rs), c = random_vec(alg, rs);
      CHECK(group_product(alg, a, zero) == a);
      CHECK(group_product(alg, a, -a) == zero);
      CHECK(group_product(alg, group_product(alg, a, b), c) == group_product(alg, a, group_product(alg, b, c)));
      // commutator of group elements is the Lie bracket in a 2-step group
      auto ab = group_product(alg, a, b), ba = group_product(alg, b, a);
      CHECK(ab - ba == bracket(alg, a, b));
    }
  }
}

TEST_CASE("orientation reversal flips the sign of the structure constants") {
  GraphAlgebra g(generate_named("G1"));
  GraphAlgebra r(generate_named("G1").reversed());
  for (int k = 0; k < g.dim_z(); ++k)
    for (int i = 0; i < g.dim_v(); ++i)
      for (int j = 0; j < g.dim_v(); ++j) CHECK(g.structure_constant(k, i, j) == -r.structure_constant(k, i, j));
}

TEST_CASE("star algebra j-matrix") {
  // S_k: Z_i runs V_0 -> V_i, so j(Z) V_0 = sum a_i V_i and j(Z) V_i = -a_i V_0
  GraphAlgebra s(generate_named("S3"));
  std::vector<Rational> a{2, 3, 5};
  auto j = j_map(s, a);
  for (int i = 1; i <= 3; ++i) {
    CHECK(j(i, 0) == a[i - 1]);
    CHECK(j(0, i) == -a[i - 1]);
  }
  CHECK(j(1, 2) == 0);
}

TEST_CASE("K3 j-matrix and the reversed-edge variant") {
  GraphAlgebra k3(generate_named("K3"));
  std::vector<Rational> z{2, 3, 5};  // a, b, c
  auto j = j_map(k3, z);
  // [V3, V1] = Z3 places +c at (0, 2)
  RationalMatrix expect(3, 3, Rational(0));
  expect(1, 0) = 2;
  expect(0, 1) = -2;
  expect(2, 1) = 3;
  expect(1, 2) = -3;
  expect(0, 2) = 5;
  expect(2, 0) = -5;
  CHECK(j == expect);
  // matrix [[0,-a,-c],[a,0,-b],[c,b,0]] belongs to the orientation with Z3 from V1 to V3
  GraphAlgebra flipped(DirectedGraph(3, {{0, 1}, {1, 2}, {0, 2}}));
  RationalMatrix expected(3, 3, Rational(0));
  expected(0, 1) = -2;
  expected(0, 2) = -5;
  expected(1, 0) = 2;
  expected(1, 2) = -3;
  expected(2, 0) = 5;
  expected(2, 1) = 3;
  CHECK(j_map(flipped, z) == expected);
  CHECK_FALSE(j == expected);
}

TEST_CASE("flatten and unflatten round trip; size checks") {
  GraphAlgebra alg(generate_named("P4"));
  RationalSampler rs(14);
  auto x = random_vec(alg, rs);
  CHECK(unflatten(alg, flatten(x)) == x);
  CHECK_THROWS_AS(unflatten(alg, std::vector<Rational>(3)), AlgebraError);
  GraphAlgebra other(generate_named("K3"));
  CHECK_THROWS_AS(bracket(other, x, x), AlgebraError);
  CHECK_THROWS_AS(j_map(alg, std::vector<Rational>(5)), AlgebraError);
}
