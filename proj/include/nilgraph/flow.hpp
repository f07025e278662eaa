#pragma once

#include "nilgraph/integrals.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilgraph {

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp(A) by scaling and squaring with a degree-12 Taylor polynomial. The
/// scaled norm is kept below theta with theta^13/13! <= 1e-13.
DenseMatrix<double> matrix_exp(const DenseMatrix<double>& a);

/// e^{t j(Z0)} X0 + Z0 for y0 = X0 + Z0.
AlgebraVector<double> velocity_flow(const GraphAlgebra& alg, const AlgebraVector<double>& y0, double t);

enum class FlowMethod { ClosedFormVelocity, FullRK4 };

std::string to_string(FlowMethod m);

struct GeodesicTrajectory {
  std::vector<double> times;
  std::vector<TangentPoint<double>> states;
  TangentPoint<double> initial;
  FlowMethod method = FlowMethod::ClosedFormVelocity;
};

/// RK4 on W' = Y + [W, Y]/2. With ClosedFormVelocity, Y(t) comes from
/// velocity_flow; with FullRK4, Y' = j(Y_z) Y_v is integrated alongside.
/// The step is shrunk slightly if needed so that t_end is hit exactly.
GeodesicTrajectory integrate_geodesic(const GraphAlgebra& alg, const TangentPoint<double>& start, double t_end,
                                      double step, FlowMethod method = FlowMethod::ClosedFormVelocity);

struct DriftEntry {
  std::string name;
  double max_drift = 0.0;
};

/// max_t |f(state_t) - f(state_0)| for each integral.
std::vector<DriftEntry> conservation_report(const GeodesicTrajectory& traj, const std::vector<FirstIntegral>& set);

/// Largest sup-norm gap between the velocities of two trajectories on the same time grid.
double max_velocity_deviation(const GeodesicTrajectory& a, const GeodesicTrajectory& b);

/// Header `t,w_1..w_n,y_1..y_n`, 17 significant digits.
void write_csv(std::ostream& out, const GeodesicTrajectory& traj);

/// Residuals of the star-graph geodesic system (vertex 0 the hub, edge Z_i from
/// V_0 to V_i, a_i = <Y, Z_i>):
///   x0'' + sum a_i x_i',  x_i'' - a_i x0',  z_i' - a_i - (x0 x_i' - x0' x_i)/2.
/// First derivatives use 5-point central differences of W; x'' uses the same
/// stencil on the stored velocity Y_v (= x'). Interior samples only.
struct StarResidual {
  double hub = 0.0;
  double leaf = 0.0;
  double center = 0.0;
  double max() const { return std::max(hub, std::max(leaf, center)); }
};

StarResidual star_geodesic_residual(const GraphAlgebra& alg, const GeodesicTrajectory& traj);

}  // namespace nilgraph
