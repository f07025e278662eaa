#include "nilgraph/flow.hpp"

#include "nilgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nilgraph {

namespace {

constexpr int kTaylorDegree = 12;

double theta() {
  // largest x with x^13 / 13! <= unit roundoff
  static const double t = std::pow(0x1p-53 * 6227020800.0, 1.0 / 13.0);
  return t;
}

void check_finite(const AlgebraVector<double>& x, const char* what, double t) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "non-finite %s at t=%.17g", what, t);
      throw FlowError(buf);
    }
}

AlgebraVector<double> axpy(const AlgebraVector<double>& x, double a, const AlgebraVector<double>& d) {
  return x + scaled(a, d);
}

AlgebraVector<double> position_rate(const GraphAlgebra& alg, const AlgebraVector<double>& w,
                                    const AlgebraVector<double>& y) {
  AlgebraVector<double> out = y;
  auto br = bracket(alg, w, y);
  for (std::size_t k = 0; k < out.z.size(); ++k) out.z[k] += 0.5 * br.z[k];
  return out;
}

AlgebraVector<double> velocity_rate(const GraphAlgebra& alg, const AlgebraVector<double>& y) {
  AlgebraVector<double> out = alg.zero(0.0);
  out.v = apply(j_map(alg, y.z), y.v, 0.0);
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

DenseMatrix<double> matrix_exp(const DenseMatrix<double>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw FlowError("matrix_exp: square matrix required");
  double norm = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (!std::isfinite(a(r, c))) throw FlowError("matrix_exp: non-finite entry");
      col += std::abs(a(r, c));
    }
    norm = std::max(norm, col);
  }
  int s = 0;
  if (norm > theta()) s = static_cast<int>(std::ceil(std::log2(norm / theta())));
  const double scale = std::ldexp(1.0, -s);
  DenseMatrix<double> b(n, n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) b(r, c) = a(r, c) * scale;

  DenseMatrix<double> sum(n, n, 0.0), term(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sum(i, i) = term(i, i) = 1.0;
  for (int k = 1; k <= kTaylorDegree; ++k) {
    term = multiply(term, b, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        term(r, c) /= k;
        sum(r, c) += term(r, c);
      }
  }
  for (int i = 0; i < s; ++i) sum = multiply(sum, sum, 0.0);
  return sum;
}

AlgebraVector<double> velocity_flow(const GraphAlgebra& alg, const AlgebraVector<double>& y0, double t) {
  alg.check(y0);
  if (!std::isfinite(t)) throw FlowError("velocity_flow: non-finite time");
  check_finite(y0, "initial velocity", 0.0);
  DenseMatrix<double> j = j_map(alg, y0.z);
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c) j(r, c) *= t;
  AlgebraVector<double> out = y0;
  out.v = apply(matrix_exp(j), y0.v, 0.0);
  return out;
}

std::string to_string(FlowMethod m) {
  return m == FlowMethod::FullRK4 ? "FullRK4" : "ClosedFormVelocity+RK4Position";
}

GeodesicTrajectory integrate_geodesic(const GraphAlgebra& alg, const TangentPoint<double>& start, double t_end,
                                      double step, FlowMethod method) {
  alg.check(start.w);
  alg.check(start.y);
  if (!(step > 0) || !std::isfinite(step)) throw FlowError("step must be positive and finite");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw FlowError("t_end must be positive and finite");
  check_finite(start.w, "position", 0.0);
  check_finite(start.y, "velocity", 0.0);

  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / step - 1e-9)));
  const double h = t_end / static_cast<double>(steps);

  GeodesicTrajectory tr;
  tr.initial = start;
  tr.method = method;
  tr.times.reserve(steps + 1);
  tr.states.reserve(steps + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(start);

  AlgebraVector<double> w = start.w, y = start.y;
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const double t1 = static_cast<double>(i + 1) * h;
    if (method == FlowMethod::ClosedFormVelocity) {
      auto ya = velocity_flow(alg, start.y, t);
      auto ym = velocity_flow(alg, start.y, t + 0.5 * h);
      auto yb = velocity_flow(alg, start.y, t1);
      auto k1 = position_rate(alg, w, ya);
      auto k2 = position_rate(alg, axpy(w, 0.5 * h, k1), ym);
      auto k3 = position_rate(alg, axpy(w, 0.5 * h, k2), ym);
      auto k4 = position_rate(alg, axpy(w, h, k3), yb);
      w = w + scaled(h / 6.0, k1 + scaled(2.0, k2) + scaled(2.0, k3) + k4);
      y = yb;
    } else {
      auto kw1 = position_rate(alg, w, y);
      auto ky1 = velocity_rate(alg, y);
      auto w2 = axpy(w, 0.5 * h, kw1), y2 = axpy(y, 0.5 * h, ky1);
      auto kw2 = position_rate(alg, w2, y2);
      auto ky2 = velocity_rate(alg, y2);
      auto w3 = axpy(w, 0.5 * h, kw2), y3 = axpy(y, 0.5 * h, ky2);
      auto kw3 = position_rate(alg, w3, y3);
      auto ky3 = velocity_rate(alg, y3);
      auto w4 = axpy(w, h, kw3), y4 = axpy(y, h, ky3);
      auto kw4 = position_rate(alg, w4, y4);
      auto ky4 = velocity_rate(alg, y4);
      w = w + scaled(h / 6.0, kw1 + scaled(2.0, kw2) + scaled(2.0, kw3) + kw4);
      y = y + scaled(h / 6.0, ky1 + scaled(2.0, ky2) + scaled(2.0, ky3) + ky4);
    }
    check_finite(w, "position", t1);
    check_finite(y, "velocity", t1);
    tr.times.push_back(t1);
    tr.states.push_back({w, y});
  }
  return tr;
}

std::vector<DriftEntry> conservation_report(const GeodesicTrajectory& traj, const std::vector<FirstIntegral>& set) {
  std::vector<DriftEntry> out;
  for (const auto& f : set) {
    CompiledIntegral c(f);
    const double f0 = c.value(traj.states.front());
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(c.value(s) - f0));
    out.push_back({f.name, worst});
  }
  return out;
}

double max_velocity_deviation(const GeodesicTrajectory& a, const GeodesicTrajectory& b) {
  if (a.states.size() != b.states.size()) throw FlowError("trajectories use different time grids");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    for (std::size_t c = 0; c < a.states[i].y.size(); ++c)
      worst = std::max(worst, std::abs(a.states[i].y[c] - b.states[i].y[c]));
  return worst;
}

void write_csv(std::ostream& out, const GeodesicTrajectory& traj) {
  const std::size_t n = traj.initial.w.size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",w_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",y_" << i;
  out << '\n';
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out << fmt(traj.times[r]);
    for (std::size_t i = 0; i < n; ++i) out << ',' << fmt(traj.states[r].w[i]);
    for (std::size_t i = 0; i < n; ++i) out << ',' << fmt(traj.states[r].y[i]);
    out << '\n';
  }
}

StarResidual star_geodesic_residual(const GraphAlgebra& alg, const GeodesicTrajectory& traj) {
  const int k = alg.dim_v() - 1;
  if (k < 1 || !(alg.graph() == generate_named("S", k)))
    throw FlowError("star residual needs the canonical star graph");
  const std::size_t n = traj.states.size();
  if (n < 5) throw FlowError("trajectory too short for the 5-point stencil");
  const double h = traj.times[1] - traj.times[0];
  auto d1 = [&](std::size_t i, auto get) {
    return (get(i - 2) - 8.0 * get(i - 1) + 8.0 * get(i + 1) - get(i + 2)) / (12.0 * h);
  };
  StarResidual r;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const auto& st = traj.states[i];
    std::vector<double> a(st.y.z);  // constant along the flow
    auto xp = [&](int c) { return d1(i, [&](std::size_t s) { return traj.states[s].w.v[c]; }); };
    auto xpp = [&](int c) { return d1(i, [&](std::size_t s) { return traj.states[s].y.v[c]; }); };
    auto zp = [&](int c) { return d1(i, [&](std::size_t s) { return traj.states[s].w.z[c]; }); };
    const double x0p = xp(0);
    double hub = xpp(0);
    for (int j = 1; j <= k; ++j) {
      const double xjp = xp(j);
      hub += a[j - 1] * xjp;
      r.leaf = std::max(r.leaf, std::abs(xpp(j) - a[j - 1] * x0p));
      const double zr = zp(j - 1) - a[j - 1] - 0.5 * (st.w.v[0] * xjp - x0p * st.w.v[j]);
      r.center = std::max(r.center, std::abs(zr));
    }
    r.hub = std::max(r.hub, std::abs(hub));
  }
  return r;
}

}  // namespace nilgraph
