#pragma once

#include "nilgraph/classifier.hpp"
#include "nilgraph/flow.hpp"
#include "nilgraph/integrals.hpp"
#include "nilgraph/quotient.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nilgraph {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1.0";

struct CommonOptions {
  std::uint64_t seed = 0;
  int samples = 64;
  bool timing = false;
};

struct IntegralsOptions {
  /// Empty: use the explicit set when the graph has one, else harvest all families.
  std::set<Family> families;
  int trials = 4;
};

struct GeodesicOptions {
  std::vector<double> y0;
  std::vector<double> w0;  ///< empty means the identity
  double t_end = 10.0;
  double step = 1e-3;
  FlowMethod method = FlowMethod::ClosedFormVelocity;
};

struct QuotientOptions {
  int k = 1;
  long r = 1;
  std::vector<long> r_vec;  ///< empty means r_i = r
  std::vector<long> m_vec;
  int invariance_samples = 100;
  int involution_points = 50;
};

Json algebra_json(const GraphAlgebra& alg);
Json rational_json(const std::vector<Rational>& x);
Json classification_json(SingularityType type, const ObstructionReport& rep);
Json integral_json(const FirstIntegral& f);
Json involution_json(const InvolutionTable& t);
Json drift_json(const std::vector<DriftEntry>& drifts);

/// Full reports. Each carries a "checks" list; a failed entry means a claimed
/// property was not reproduced.
Json run_classify(const GraphAlgebra& alg, const CommonOptions& opt);
Json run_integrals(const GraphAlgebra& alg, const CommonOptions& opt, const IntegralsOptions& iopt);
Json run_geodesic(const GraphAlgebra& alg, const CommonOptions& opt, const GeodesicOptions& gopt,
                  GeodesicTrajectory* trajectory = nullptr);
Json run_quotient(const CommonOptions& opt, const QuotientOptions& qopt);

bool all_checks_pass(const Json& report);

/// Indented plain-text rendering of a report; carries the same values as the JSON.
std::string render_human(const Json& report);

/// Parses "energy,center,butler,killing,quadratic,k3"; throws IntegralError on unknown names.
std::set<Family> parse_families(const std::string& list);

}  // namespace nilgraph
