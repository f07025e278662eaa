#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilgraph/flow.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace nilgraph;

namespace {

AlgebraVector<double> random_velocity(const GraphAlgebra& alg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0), mag(1.0, 2.0);
  std::bernoulli_distribution sign(0.5);
  AlgebraVector<double> y = alg.zero(0.0);
  for (auto& c : y.v) c = uni(rng);
  for (auto& c : y.z) c = sign(rng) ? mag(rng) : -mag(rng);
  return y;
}

double norm(const AlgebraVector<double>& x) { return std::sqrt(inner(x, x)); }

double dist(const AlgebraVector<double>& a, const AlgebraVector<double>& b) { return norm(a - b); }

}  // namespace

TEST_CASE("matrix exponential of rotations") {
  for (double t : {0.0, 0.1, 1.0, 3.0, 25.0, 200.0}) {
    DenseMatrix<double> a(2, 2, 0.0);
    a(1, 0) = t;
    a(0, 1) = -t;
    auto e = matrix_exp(a);
    CHECK(e(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(e(1, 0) == doctest::Approx(std::sin(t)).epsilon(1e-12));
    CHECK(std::abs(e(0, 0) - std::cos(t)) < 1e-12 * std::max(1.0, t));
    CHECK(std::abs(e(1, 0) - std::sin(t)) < 1e-12 * std::max(1.0, t));
  }
}

TEST_CASE("matrix exponential: exp(A) exp(-A) = I and diagonal case") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  DenseMatrix<double> a(5, 5, 0.0), na(5, 5, 0.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      a(i, j) = uni(rng);
      na(i, j) = -a(i, j);
    }
  auto p = multiply(matrix_exp(a), matrix_exp(na), 0.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(std::abs(p(i, j) - (i == j ? 1.0 : 0.0)) < 1e-11);
  DenseMatrix<double> d(3, 3, 0.0);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  d(2, 2) = 0.5;
  auto e = matrix_exp(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(e(0, 1) == 0.0);
  DenseMatrix<double> bad(1, 1, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(matrix_exp(bad), FlowError);
}

TEST_CASE("velocity flow on the Heisenberg algebra") {
  GraphAlgebra k2(generate_named("K2"));
  AlgebraVector<double> y0 = k2.zero(0.0);
  y0.v[0] = 1.0;
  y0.z[0] = 1.0;
  for (double t : {0.0, 0.5, 2.0, 7.0}) {
    auto y = velocity_flow(k2, y0, t);
    CHECK(std::abs(y.v[0] - std::cos(t)) < 1e-13);
    CHECK(std::abs(y.v[1] - std::sin(t)) < 1e-13);
    CHECK(y.z[0] == 1.0);
  }
}

TEST_CASE("velocity flow: zero center, isometry, one-parameter group") {
  std::mt19937_64 rng(2);
  for (const char* n : {"K3", "K4", "P4", "S3", "G1"}) {
    GraphAlgebra alg(generate_named(n));
    auto y0 = random_velocity(alg, rng);
    auto flat = y0;
    for (auto& c : flat.z) c = 0.0;
    CHECK(velocity_flow(alg, flat, 3.7) == flat);
    for (double t : {0.3, 2.0, 10.0}) {
      auto y = velocity_flow(alg, y0, t);
      CHECK(std::abs(norm(y) - norm(y0)) < 1e-12);
      CHECK(y.z == y0.z);
      const double s = 1.3;
      CHECK(dist(velocity_flow(alg, velocity_flow(alg, y0, s), t), velocity_flow(alg, y0, s + t)) < 1e-11);
    }
  }
  GraphAlgebra alg(generate_named("K3"));
  auto y = alg.zero(0.0);
  y.v[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(velocity_flow(alg, y, 1.0), FlowError);
}

TEST_CASE("straight line when the center velocity vanishes") {
  GraphAlgebra alg(generate_named("K3"));
  TangentPoint<double> start{alg.zero(0.0), alg.zero(0.0)};
  start.y.v[0] = 1.0;
  auto tr = integrate_geodesic(alg, start, 2.0, 0.01);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.states.front().w == start.w);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(std::abs(tr.states[i].w.v[0] - tr.times[i]) < 1e-14);
    for (double c : tr.states[i].w.z) CHECK(c == 0.0);
  }
  CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("Heisenberg geodesic against the closed form") {
  GraphAlgebra k2(generate_named("K2"));
  const double c = 1.5;
  TangentPoint<double> start{k2.zero(0.0), k2.zero(0.0)};
  start.y.v[0] = 1.0;
  start.y.z[0] = c;
  for (FlowMethod m : {FlowMethod::ClosedFormVelocity, FlowMethod::FullRK4}) {
    auto tr = integrate_geodesic(k2, start, 10.0, 1e-3, m);
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); i += 97) {
      const double t = tr.times[i];
      const double x1 = std::sin(c * t) / c, x2 = (1.0 - std::cos(c * t)) / c;
      const double z = c * t + t / (2 * c) - std::sin(c * t) / (2 * c * c);
      const auto& w = tr.states[i].w;
      worst = std::max({worst, std::abs(w.v[0] - x1), std::abs(w.v[1] - x2), std::abs(w.z[0] - z)});
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("left translation maps geodesics to geodesics") {
  std::mt19937_64 rng(3);
  GraphAlgebra alg(generate_named("G2"));
  TangentPoint<double> a{alg.zero(0.0), random_velocity(alg, rng)};
  TangentPoint<double> b{random_velocity(alg, rng), a.y};
  auto ta = integrate_geodesic(alg, a, 3.0, 1e-3), tb = integrate_geodesic(alg, b, 3.0, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.states.size(); ++i)
    worst = std::max(worst, dist(tb.states[i].w, group_product(alg, b.w, ta.states[i].w)));
  CHECK(worst < 1e-10);
}

TEST_CASE("star graph geodesic system residuals") {
  for (int k : {1, 2, 3}) {
    GraphAlgebra alg(generate_named("S", k));
    TangentPoint<double> start{alg.zero(0.0), alg.zero(0.0)};
    start.y.v[0] = 1.0;
    for (auto& z : start.y.z) z = 1.0;
    auto tr = integrate_geodesic(alg, start, 10.0, 1e-3);
    auto r = star_geodesic_residual(alg, tr);
    CHECK_MESSAGE(r.max() < 1e-8, "k=" << k << " hub " << r.hub << " leaf " << r.leaf << " center " << r.center);
  }
  std::mt19937_64 rng(4);
  GraphAlgebra s3(generate_named("S3"));
  for (int trial = 0; trial < 3; ++trial) {
    TangentPoint<double> start{random_velocity(s3, rng), random_velocity(s3, rng)};
    auto r = star_geodesic_residual(s3, integrate_geodesic(s3, start, 10.0, 1e-3));
    CHECK(r.max() < 1e-8);
  }
  GraphAlgebra k3(generate_named("K3"));
  TangentPoint<double> p{k3.zero(0.0), k3.zero(0.0)};
  p.y.v[0] = 1.0;
  CHECK_THROWS_AS(star_geodesic_residual(k3, integrate_geodesic(k3, p, 1.0, 0.1)), FlowError);
}

TEST_CASE("residual detects a wrong trajectory") {
  GraphAlgebra alg(generate_named("S2"));
  TangentPoint<double> start{alg.zero(0.0), alg.zero(0.0)};
  start.y.v[0] = 1.0;
  start.y.z[0] = 1.0;
  auto tr = integrate_geodesic(alg, start, 2.0, 1e-3);
  for (std::size_t i = 0; i < tr.states.size(); ++i) tr.states[i].w.z[0] += 0.1 * tr.times[i] * tr.times[i];
  CHECK(star_geodesic_residual(alg, tr).center > 1e-3);
}

TEST_CASE("full RK4 velocity converges at fourth order") {
  std::mt19937_64 rng(5);
  for (const char* n : {"S2", "K3", "P4", "K4"}) {
    GraphAlgebra alg(generate_named(n));
    TangentPoint<double> start{alg.zero(0.0), random_velocity(alg, rng)};
    auto ref2 = integrate_geodesic(alg, start, 10.0, 2e-3);
    auto ref1 = integrate_geodesic(alg, start, 10.0, 1e-3);
    auto rk2 = integrate_geodesic(alg, start, 10.0, 2e-3, FlowMethod::FullRK4);
    auto rk1 = integrate_geodesic(alg, start, 10.0, 1e-3, FlowMethod::FullRK4);
    const double d2 = max_velocity_deviation(ref2, rk2), d1 = max_velocity_deviation(ref1, rk1);
    CHECK_MESSAGE(d2 / d1 >= 12.0, n << " ratio " << d2 / d1 << " (" << d2 << ", " << d1 << ")");
    CHECK(d2 / d1 <= 20.0);
  }
}

TEST_CASE("energy and certified integrals are conserved") {
  std::mt19937_64 rng(6);
  for (const char* n : {"S3", "K3", "P4", "K4", "G1"}) {
    GraphAlgebra alg(generate_named(n));
    auto space = make_phase_space(alg);
    std::vector<FirstIntegral> set{energy(space)};
    for (int i = 0; i < alg.dim(); ++i) set.push_back(killing_integral(space, alg.basis(i)));
    for (int i = 1; i <= alg.dim_v() / 2; ++i) set.push_back(butler_integral(space, i));
    TangentPoint<double> start{random_velocity(alg, rng), random_velocity(alg, rng)};
    auto tr = integrate_geodesic(alg, start, 10.0, 1e-3);
    auto drifts = conservation_report(tr, set);
    REQUIRE(drifts.size() == set.size());
    CHECK(drifts[0].max_drift < 1e-9);
    for (const auto& d : drifts) CHECK_MESSAGE(d.max_drift < 1e-8, n << " " << d.name << " " << d.max_drift);
  }
}

TEST_CASE("a function that is not a first integral drifts") {
  GraphAlgebra alg(generate_named("K3"));
  auto space = make_phase_space(alg);
  auto f = from_polynomial(space, Family::Custom, "y1", space->y(0));
  REQUIRE_FALSE(is_first_integral(f).holds);
  std::mt19937_64 rng(7);
  TangentPoint<double> start{alg.zero(0.0), random_velocity(alg, rng)};
  auto tr = integrate_geodesic(alg, start, 10.0, 1e-2);
  CHECK(conservation_report(tr, {f})[0].max_drift > 1e-2);
}

TEST_CASE("time derivative along the flow matches the Hamiltonian field") {
  // d/dt f(gamma(t)) = df(X_E) = residual, evaluated at the start
  GraphAlgebra alg(generate_named("P4"));
  auto space = make_phase_space(alg);
  Poly p = space->w(0) * space->y(1) + space->y(4) * space->y(2) * space->w(5);
  auto f = from_polynomial(space, Family::Custom, "p", p);
  std::mt19937_64 rng(8);
  TangentPoint<double> start{random_velocity(alg, rng), random_velocity(alg, rng)};
  auto tr = integrate_geodesic(alg, start, 0.02, 1e-3);
  CompiledIntegral c(f);
  const double h = tr.times[1];
  const double fd = (-c.value(tr.states[2]) + 4 * c.value(tr.states[1]) - 3 * c.value(tr.states[0])) / (2 * h);
  auto pt = space->point(start);
  const double res = is_first_integral(f).residual.evaluate(std::span<const double>(pt));
  CHECK(fd == doctest::Approx(res).epsilon(1e-5));
}

TEST_CASE("argument and state errors") {
  GraphAlgebra alg(generate_named("K3"));
  TangentPoint<double> p{alg.zero(0.0), alg.zero(0.0)};
  p.y.v[0] = 1.0;
  CHECK_THROWS_AS(integrate_geodesic(alg, p, 1.0, 0.0), FlowError);
  CHECK_THROWS_AS(integrate_geodesic(alg, p, 0.0, 0.1), FlowError);
  CHECK_THROWS_AS(integrate_geodesic(alg, p, -1.0, 0.1), FlowError);
  CHECK_THROWS_AS(integrate_geodesic(alg, p, std::nan(""), 0.1), FlowError);
  // overflow in the position equation is reported with its time
  TangentPoint<double> huge{alg.zero(0.0), alg.zero(0.0)};
  huge.y.v[0] = 1e200;
  huge.y.v[1] = 1e200;
  huge.y.z[0] = 1e-3;
  try {
    integrate_geodesic(alg, huge, 1.0, 0.1);
    FAIL("expected overflow");
  } catch (const FlowError& e) {
    CHECK(std::string(e.what()).find("t=") != std::string::npos);
  }
}

TEST_CASE("CSV export") {
  GraphAlgebra alg(generate_named("K2"));
  TangentPoint<double> p{alg.zero(0.0), alg.zero(0.0)};
  p.y.v[0] = 1.0 / 3.0;
  p.y.z[0] = 1.0;
  auto tr = integrate_geodesic(alg, p, 0.5, 0.1);
  std::ostringstream out;
  write_csv(out, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,w_1,w_2,w_3,y_1,y_2,y_3");
  std::size_t rows = 0;
  std::string first;
  while (std::getline(in, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  CHECK(rows == tr.times.size());
  // 17 significant digits round-trip exactly
  std::stringstream fields(first);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(fields, cell, ',')) vals.push_back(std::stod(cell));
  CHECK(vals.size() == 7);
  CHECK(vals[4] == 1.0 / 3.0);
}
