#include "nilgraph/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace nilgraph {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Json header(const std::string& command, std::uint64_t seed) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = seed;
  return j;
}

void add_check(Json& report, const std::string& name, bool passed, const std::string& detail = "") {
  Json c;
  c["name"] = name;
  c["passed"] = passed;
  if (!detail.empty()) c["detail"] = detail;
  report["checks"].push_back(c);
}

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Json double_vec(const AlgebraVector<double>& x) {
  Json a = Json::array();
  for (std::size_t i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

void finish(Json& report, const CommonOptions& opt, const Json& timing) {
  if (!report.contains("checks")) report["checks"] = Json::array();
  if (opt.timing) report["timing_ms"] = timing;
}

std::vector<FirstIntegral> integral_set(const SpacePtr& space, const IntegralsOptions& iopt, std::uint64_t seed,
                                        std::string& source) {
  if (iopt.families.empty()) {
    if (auto known = known_integral_set(space)) {
      source = "explicit";
      return *known;
    }
  }
  source = "harvest";
  return harvest_integrals(space, iopt.families, iopt.trials, seed).integrals;
}

}  // namespace

Json rational_json(const std::vector<Rational>& x) {
  Json a = Json::array();
  for (const auto& q : x) a.push_back(to_string(q));
  return a;
}

Json algebra_json(const GraphAlgebra& alg) {
  Json j;
  const auto& g = alg.graph();
  auto name = g.vertex_count() <= 8 ? recognize_named(g) : std::nullopt;
  j["graph"] = name ? Json(*name) : Json(nullptr);
  j["vertices"] = g.vertex_count();
  Json edges = Json::array();
  Json table = Json::array();
  for (int k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    edges.push_back(Json::array({e.source + 1, e.target + 1}));
    table.push_back("[" + alg.basis_name(e.source) + "," + alg.basis_name(e.target) + "]=" +
                    alg.basis_name(alg.dim_v() + k));
  }
  j["edges"] = edges;
  j["dim_v"] = alg.dim_v();
  j["dim_z"] = alg.dim_z();
  j["dim"] = alg.dim();
  j["structure"] = table;
  return j;
}

Json classification_json(SingularityType type, const ObstructionReport& rep) {
  Json j;
  j["singularity"] = to_string(type);
  j["verdict"] = to_string(rep.verdict);
  j["generic_kernel_dim"] = rep.generic_kernel_dim;
  j["generic_bracket_dim"] = rep.generic_bracket_dim;
  j["minimal_pairs"] = rep.minimal_pairs;
  j["samples_used"] = rep.samples_used;
  j["genericity"] = "each functional has minimal isotropy dimension over the samples; the pair minimizes dim of the isotropy bracket";
  if (rep.witness) {
    Json w;
    w["z"] = rational_json(rep.witness->z);
    w["z_tilde"] = rational_json(rep.witness->z_tilde);
    w["u"] = rational_json(rep.witness->u);
    w["u_tilde"] = rational_json(rep.witness->u_tilde);
    w["bracket"] = rational_json(rep.witness->bracket);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json integral_json(const FirstIntegral& f) {
  Json j;
  j["name"] = f.name;
  j["family"] = to_string(f.family);
  j["degree"] = f.value.degree();
  j["polynomial"] = f.value.to_string();
  auto chk = is_first_integral(f);
  j["first_integral"] = chk.holds;
  j["residual_degree"] = chk.residual.degree();
  j["descends"] = invariant_descent_check(f);
  return j;
}

Json involution_json(const InvolutionTable& t) {
  Json j;
  j["names"] = t.names;
  Json commute = Json::array(), deg = Json::array();
  for (std::size_t i = 0; i < t.names.size(); ++i) {
    Json row = Json::array(), drow = Json::array();
    for (std::size_t k = 0; k < t.names.size(); ++k) {
      row.push_back(static_cast<bool>(t.commute[i][k]));
      drow.push_back(t.residual_degree[i][k]);
    }
    commute.push_back(row);
    deg.push_back(drow);
  }
  j["commute"] = commute;
  j["residual_degree"] = deg;
  j["all_commute"] = t.all_commute();
  return j;
}

Json drift_json(const std::vector<DriftEntry>& drifts) {
  Json a = Json::array();
  for (const auto& d : drifts) {
    Json e;
    e["name"] = d.name;
    e["max_drift"] = d.max_drift;
    a.push_back(e);
  }
  return a;
}

Json run_classify(const GraphAlgebra& alg, const CommonOptions& opt) {
  Json report = header("classify", opt.seed);
  report["algebra"] = algebra_json(alg);
  report["checks"] = Json::array();
  Json timing;
  auto t0 = Clock::now();
  const auto type = classify_singularity(alg);
  const auto rep = non_integrability_test(alg, opt.samples, opt.seed);
  report["sections"]["classification"] = classification_json(type, rep);
  timing["classification"] = ms_since(t0);
  if (rep.witness)
    add_check(report, "witness verified", verify_witness(alg, *rep.witness, alg.dim_v() - rep.generic_kernel_dim));
  finish(report, opt, timing);
  return report;
}

Json run_integrals(const GraphAlgebra& alg, const CommonOptions& opt, const IntegralsOptions& iopt) {
  Json report = header("integrals", opt.seed);
  report["algebra"] = algebra_json(alg);
  report["checks"] = Json::array();
  Json timing;
  auto t0 = Clock::now();
  auto space = make_phase_space(alg);
  std::string source;
  auto set = integral_set(space, iopt, opt.seed, source);
  Json sec;
  sec["source"] = source;
  Json fams = Json::array();
  for (Family f : {Family::Energy, Family::Center, Family::Butler, Family::Killing, Family::Quadratic,
                   Family::K3Special}) {
    const bool used = source == "explicit"
                          ? std::any_of(set.begin(), set.end(), [f](const FirstIntegral& g) { return g.family == f; })
                          : iopt.families.empty() || iopt.families.count(f);
    if (used) fams.push_back(to_string(f));
  }
  sec["families"] = fams;
  Json list = Json::array();
  bool all_certified = true;
  for (const auto& f : set) {
    list.push_back(integral_json(f));
    all_certified = all_certified && list.back()["first_integral"].get<bool>();
  }
  sec["integrals"] = list;
  auto table = involution_table(set);
  sec["involution"] = involution_json(table);
  const int rank = gradient_rank(set, iopt.trials, opt.seed);
  sec["rank"] = rank;
  sec["dim"] = alg.dim();
  const bool met = all_certified && table.all_commute() && rank == alg.dim();
  sec["liouville_count_met"] = met;
  timing["integrals"] = ms_since(t0);

  t0 = Clock::now();
  auto obstruction = non_integrability_test(alg, std::max(16, opt.samples), opt.seed);
  Json q;
  q["verdict"] = to_string(obstruction.verdict);
  q["note"] = obstruction.verdict == Verdict::NonIntegrable
                  ? "no compact quotient of this group has a completely integrable geodesic flow"
                  : "no obstruction found on compact quotients";
  sec["compact_quotients"] = q;
  timing["obstruction"] = ms_since(t0);
  report["sections"]["integrals"] = sec;

  add_check(report, "all listed functions are first integrals", all_certified);
  if (source == "explicit") {
    add_check(report, "explicit set in involution", table.all_commute());
    add_check(report, "explicit set has rank dim N", rank == alg.dim(),
              "rank " + std::to_string(rank) + " of " + std::to_string(alg.dim()));
  }
  finish(report, opt, timing);
  return report;
}

Json run_geodesic(const GraphAlgebra& alg, const CommonOptions& opt, const GeodesicOptions& gopt,
                  GeodesicTrajectory* trajectory) {
  Json report = header("geodesic", opt.seed);
  report["algebra"] = algebra_json(alg);
  report["checks"] = Json::array();
  Json timing;
  if (static_cast<int>(gopt.y0.size()) != alg.dim())
    throw FlowError("initial velocity needs " + std::to_string(alg.dim()) + " values, got " +
                    std::to_string(gopt.y0.size()));
  if (!gopt.w0.empty() && static_cast<int>(gopt.w0.size()) != alg.dim())
    throw FlowError("initial position needs " + std::to_string(alg.dim()) + " values");
  TangentPoint<double> start{gopt.w0.empty() ? alg.zero(0.0) : unflatten(alg, gopt.w0), unflatten(alg, gopt.y0)};

  auto t0 = Clock::now();
  auto traj = integrate_geodesic(alg, start, gopt.t_end, gopt.step, gopt.method);
  timing["integration"] = ms_since(t0);

  t0 = Clock::now();
  auto space = make_phase_space(alg);
  std::string source;
  auto set = integral_set(space, IntegralsOptions{}, opt.seed, source);
  auto drifts = conservation_report(traj, set);
  timing["conservation"] = ms_since(t0);

  Json sec;
  sec["method"] = to_string(gopt.method);
  sec["t_end"] = gopt.t_end;
  sec["step"] = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : gopt.step;
  sec["samples"] = traj.times.size();
  sec["initial_w"] = double_vec(start.w);
  sec["initial_y"] = double_vec(start.y);
  sec["final_w"] = double_vec(traj.states.back().w);
  sec["final_y"] = double_vec(traj.states.back().y);
  sec["integral_source"] = source;
  sec["drift"] = drift_json(drifts);

  // tolerances are stated for step 1e-3 over [0, 10]
  const bool checked = gopt.step <= 1e-3;
  const double scale = std::max(1.0, gopt.t_end / 10.0);
  sec["tolerances_applied"] = checked;
  if (checked) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!is_first_integral(set[i]).holds) continue;
      const double tol = (set[i].family == Family::Energy ? 1e-9 : 1e-8) * scale;
      add_check(report, "drift " + drifts[i].name, drifts[i].max_drift < tol, fmt_g(drifts[i].max_drift));
    }
  }
  const int k = alg.dim_v() - 1;
  if (k >= 1 && alg.graph() == generate_named("S", k)) {
    auto res = star_geodesic_residual(alg, traj);
    Json r;
    r["hub"] = res.hub;
    r["leaf"] = res.leaf;
    r["center"] = res.center;
    sec["star_residual"] = r;
    if (checked) add_check(report, "star geodesic system residual", res.max() < 1e-8, fmt_g(res.max()));
  }
  report["sections"]["flow"] = sec;
  if (trajectory) *trajectory = std::move(traj);
  finish(report, opt, timing);
  return report;
}

Json run_quotient(const CommonOptions& opt, const QuotientOptions& qopt) {
  std::vector<long> r_vec = qopt.r_vec.empty() ? std::vector<long>(std::max(qopt.k, 0), qopt.r) : qopt.r_vec;
  StarLattice lattice(qopt.k, qopt.r, r_vec, qopt.m_vec);
  const auto& alg = lattice.algebra();
  Json report = header("quotient-check", opt.seed);
  report["algebra"] = algebra_json(alg);
  report["checks"] = Json::array();
  Json timing;
  Json sec;

  auto t0 = Clock::now();
  Json lat;
  lat["k"] = qopt.k;
  lat["r"] = qopt.r;
  lat["r_vec"] = r_vec;
  lat["m_vec"] = qopt.m_vec;
  lat["factors"] = lattice.factors();
  auto closure = lattice_closure_check(lattice, 50, opt.seed);
  lat["products_checked"] = closure.products_checked;
  lat["closed"] = closure.closed;
  sec["lattice"] = lat;
  add_check(report, "lattice closed under the product", closure.closed);
  timing["lattice"] = ms_since(t0);

  t0 = Clock::now();
  auto space = make_phase_space(alg);
  Json descent = Json::array();
  auto descent_entry = [&](const FirstIntegral& f, bool expected) {
    Json e;
    e["name"] = f.name;
    e["descends"] = invariant_descent_check(f);
    e["expected"] = expected;
    descent.push_back(e);
    add_check(report, "descent " + f.name, invariant_descent_check(f) == expected);
  };
  descent_entry(energy(space), true);
  for (int j = 0; j < qopt.k; ++j) descent_entry(center_integral(space, alg.center(j).z), true);
  for (int j = 1; j <= qopt.k; ++j) descent_entry(killing_integral(space, alg.vertex(j)), false);
  sec["descent"] = descent;

  const bool mod_ok = mod_relation_check(lattice, 20, opt.seed);
  sec["mod_relation"] = mod_ok;
  add_check(report, "mod relation (exact)", mod_ok);

  const double inv = invariance_residual(lattice, qopt.invariance_samples, opt.seed);
  sec["invariance_residual"] = inv;
  add_check(report, "lattice invariance of F_j", inv < 1e-10, fmt_g(inv));
  timing["descent"] = ms_since(t0);

  t0 = Clock::now();
  auto invol = quotient_involution_check(qopt.k, qopt.involution_points, opt.seed);
  Json it;
  it["names"] = invol.names;
  it["residual"] = invol.residual;
  it["max_residual"] = invol.max_residual();
  sec["involution"] = it;
  add_check(report, "quotient involution", invol.max_residual() < 1e-9, fmt_g(invol.max_residual()));

  const int rank = quotient_rank(qopt.k, qopt.involution_points, opt.seed);
  sec["rank"] = rank;
  sec["expected_rank"] = 2 * qopt.k + 1;
  sec["rank_condition"] = "all |f_Zj| in [0.5, 1.5]";
  add_check(report, "quotient rank 2k+1", rank == 2 * qopt.k + 1);
  timing["involution"] = ms_since(t0);

  t0 = Clock::now();
  std::mt19937_64 rng(opt.seed);
  auto start = random_star_point(alg, rng);
  auto traj = integrate_geodesic(alg, start, 10.0, 1e-3);
  const double drift = quotient_drift(qopt.k, traj);
  sec["quotient_drift"] = drift;
  add_check(report, "F_j conserved along geodesics", drift < 1e-7, fmt_g(drift));
  timing["flow"] = ms_since(t0);

  report["sections"]["quotient"] = sec;
  finish(report, opt, timing);
  return report;
}

bool all_checks_pass(const Json& report) {
  if (!report.contains("checks")) return true;
  for (const auto& c : report["checks"])
    if (!c["passed"].get<bool>()) return false;
  return true;
}

namespace {

std::string scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  if (j.is_null()) return "none";
  return j.dump();
}

bool flat_array(const Json& j) {
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

void render(const Json& j, int indent, std::ostringstream& out) {
  const std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    const std::string key = j.is_object() ? it.key() : "-";
    const char* open = j.is_object() ? ":\n" : "\n";
    if (v.is_object()) {
      out << pad << key << open;
      render(v, indent + 2, out);
    } else if (v.is_array() && flat_array(v)) {
      out << pad << key << (j.is_object() ? ": [" : " [");
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
      out << "]\n";
    } else if (v.is_array()) {
      out << pad << key << open;
      render(v, indent + 2, out);
    } else {
      out << pad << key << (j.is_object() ? ": " : " ") << scalar(v) << "\n";
    }
  }
}

}  // namespace

std::string render_human(const Json& report) {
  std::ostringstream out;
  render(report, 0, out);
  if (report.contains("sections") && report["sections"].contains("integrals")) {
    const auto& s = report["sections"]["integrals"];
    out << "Liouville count met: " << (s["liouville_count_met"].get<bool>() ? "yes" : "no") << "\n";
    if (s["compact_quotients"]["verdict"] == "NonIntegrable")
      out << "Liouville count met on compact quotients: no (obstructed)\n";
  }
  if (report.contains("checks")) {
    std::size_t failed = 0;
    for (const auto& c : report["checks"]) failed += c["passed"].get<bool>() ? 0 : 1;
    out << "checks: " << report["checks"].size() - failed << "/" << report["checks"].size() << " passed\n";
  }
  return out.str();
}

std::set<Family> parse_families(const std::string& list) {
  std::set<Family> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    bool found = false;
    for (Family f : {Family::Energy, Family::Center, Family::Quadratic, Family::Butler, Family::Killing,
                     Family::K3Special})
      if (to_string(f) == item) {
        out.insert(f);
        found = true;
      }
    if (!found) throw IntegralError("unknown integral family '" + item + "'");
  }
  return out;
}

}  // namespace nilgraph
