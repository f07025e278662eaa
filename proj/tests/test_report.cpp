#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilgraph/report.hpp"

using namespace nilgraph;

namespace {

void leaves(const Json& j, std::vector<std::string>& out) {
  if (j.is_structured()) {
    for (const auto& x : j) leaves(x, out);
  } else if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_number()) {
    out.push_back(j.dump());
  }
}

void check_human_matches(const Json& report) {
  const std::string text = render_human(report);
  std::vector<std::string> vals;
  leaves(report, vals);
  for (const auto& v : vals) CHECK_MESSAGE(text.find(v) != std::string::npos, "missing " << v);
}

}  // namespace

TEST_CASE("algebra description") {
  GraphAlgebra k3(generate_named("K3"));
  auto j = algebra_json(k3);
  CHECK(j["graph"] == "K3");
  CHECK(j["dim"] == 6);
  CHECK(j["edges"][2] == Json::array({3, 1}));
  CHECK(j["structure"][2] == "[V3,V1]=Z3");
  GraphAlgebra odd(parse_graph("vertices 3\nedge 2 1\nedge 2 3\n"));
  CHECK(algebra_json(odd)["graph"].is_null());
  CHECK(rational_json({Rational(1, 2), Rational(-3)}) == Json::array({"1/2", "-3"}));
}

TEST_CASE("classify report") {
  CommonOptions opt;
  auto r = run_classify(GraphAlgebra(generate_named("K3")), opt);
  CHECK(r["command"] == "classify");
  CHECK(r["schema_version"] == kSchemaVersion);
  const auto& c = r["sections"]["classification"];
  CHECK(c["singularity"] == "Singular");
  CHECK(c["verdict"] == "NonIntegrable");
  CHECK(c["witness"].is_object());
  REQUIRE(r["checks"].size() == 1);
  CHECK(r["checks"][0]["passed"] == true);
  CHECK(all_checks_pass(r));
  CHECK_FALSE(r.contains("timing_ms"));

  auto p4 = run_classify(GraphAlgebra(generate_named("P4")), opt);
  CHECK(p4["sections"]["classification"]["singularity"] == "AlmostNonSingular");
  CHECK(p4["sections"]["classification"]["witness"].is_null());
  auto k2 = run_classify(GraphAlgebra(generate_named("K2")), opt);
  CHECK(k2["sections"]["classification"]["singularity"] == "NonSingular");
  check_human_matches(r);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  CommonOptions opt{42, 32, false};
  GraphAlgebra k4(generate_named("K4"));
  CHECK(run_classify(k4, opt).dump() == run_classify(k4, opt).dump());
  CHECK(run_integrals(k4, opt, {}).dump() == run_integrals(k4, opt, {}).dump());
  QuotientOptions q;
  q.k = 2;
  q.m_vec = {2, 3};
  CHECK(run_quotient(opt, q).dump() == run_quotient(opt, q).dump());
}

TEST_CASE("timing only on request") {
  CommonOptions opt;
  opt.timing = true;
  auto r = run_classify(GraphAlgebra(generate_named("C4")), opt);
  REQUIRE(r.contains("timing_ms"));
  CHECK(r["timing_ms"]["classification"].get<double>() >= 0.0);
}

TEST_CASE("integrals report") {
  CommonOptions opt;
  auto r = run_integrals(GraphAlgebra(generate_named("P4")), opt, {});
  const auto& s = r["sections"]["integrals"];
  CHECK(s["source"] == "explicit");
  CHECK(s["integrals"].size() == 7);
  CHECK(s["rank"] == 7);
  CHECK(s["liouville_count_met"] == true);
  CHECK(s["involution"]["all_commute"] == true);
  CHECK(all_checks_pass(r));
  CHECK(render_human(r).find("Liouville count met: yes") != std::string::npos);
  check_human_matches(r);

  IntegralsOptions only;
  only.families = parse_families("energy,center");
  auto h = run_integrals(GraphAlgebra(generate_named("P4")), opt, only);
  CHECK(h["sections"]["integrals"]["source"] == "harvest");
  CHECK(h["sections"]["integrals"]["families"] == Json::array({"energy", "center"}));
  CHECK(h["sections"]["integrals"]["integrals"].size() == 4);
  CHECK(h["sections"]["integrals"]["liouville_count_met"] == false);
  CHECK(render_human(h).find("Liouville count met: no") != std::string::npos);
  // not meeting the count is a finding, not a failed check
  CHECK(all_checks_pass(h));

  auto k3 = run_integrals(GraphAlgebra(generate_named("K3")), opt, {});
  CHECK(k3["sections"]["integrals"]["integrals"].size() == 6);
  CHECK(k3["sections"]["integrals"]["compact_quotients"]["verdict"] == "NonIntegrable");
}

TEST_CASE("geodesic report") {
  CommonOptions opt;
  GeodesicOptions g;
  g.y0 = {1, 0, 0, 1, 1};
  GeodesicTrajectory traj;
  auto r = run_geodesic(GraphAlgebra(generate_named("S2")), opt, g, &traj);
  const auto& f = r["sections"]["flow"];
  CHECK(f["samples"] == 10001);
  CHECK(traj.times.size() == 10001);
  CHECK(f["tolerances_applied"] == true);
  CHECK(f.contains("star_residual"));
  CHECK(r["checks"].size() == 6);
  CHECK(all_checks_pass(r));
  CHECK(f["final_y"][3] == 1.0);
  check_human_matches(r);

  auto coarse = run_geodesic(GraphAlgebra(generate_named("K3")), opt, {{1, 0, 0, 1, 1, 1}, {}, 1.0, 0.01, FlowMethod::FullRK4});
  CHECK(coarse["sections"]["flow"]["tolerances_applied"] == false);
  CHECK(coarse["checks"].empty());
  CHECK(coarse["sections"]["flow"]["method"] == "FullRK4");

  GeodesicOptions bad;
  bad.y0 = {1, 2};
  CHECK_THROWS_AS(run_geodesic(GraphAlgebra(generate_named("K3")), opt, bad), FlowError);
  bad.y0 = {1, 0, 0, 1, 1, 1};
  bad.w0 = {1};
  CHECK_THROWS_AS(run_geodesic(GraphAlgebra(generate_named("K3")), opt, bad), FlowError);
}

TEST_CASE("quotient report") {
  CommonOptions opt;
  QuotientOptions q;
  q.k = 3;
  q.r = 2;
  q.m_vec = {1, 2, 3};
  auto r = run_quotient(opt, q);
  const auto& s = r["sections"]["quotient"];
  CHECK(s["lattice"]["r_vec"] == Json::array({2, 2, 2}));
  CHECK(s["lattice"]["factors"] == Json::array({12, 4, 4, 4, 1, 2, 3}));
  CHECK(s["rank"] == 7);
  CHECK(s["expected_rank"] == 7);
  CHECK(all_checks_pass(r));
  check_human_matches(r);

  q.r_vec = {1, 2, 3};
  CHECK(run_quotient(opt, q)["sections"]["quotient"]["lattice"]["factors"] == Json::array({12, 2, 4, 6, 1, 2, 3}));
  q.r_vec = {1};
  CHECK_THROWS_AS(run_quotient(opt, q), QuotientError);
  q.r_vec = {};
  q.m_vec = {1, 0, 3};
  CHECK_THROWS_AS(run_quotient(opt, q), QuotientError);
}

TEST_CASE("failed checks are detected") {
  Json r;
  r["checks"] = Json::array();
  CHECK(all_checks_pass(r));
  r["checks"].push_back({{"name", "a"}, {"passed", true}});
  r["checks"].push_back({{"name", "b"}, {"passed", false}});
  CHECK_FALSE(all_checks_pass(r));
  CHECK(render_human(r).find("checks: 1/2 passed") != std::string::npos);
}

TEST_CASE("family list parsing") {
  CHECK(parse_families("").empty());
  CHECK(parse_families("energy,k3") == std::set<Family>{Family::Energy, Family::K3Special});
  CHECK(parse_families("butler,,killing").size() == 2);
  CHECK_THROWS_AS(parse_families("energy,bogus"), IntegralError);
  CHECK_THROWS_AS(parse_families("custom"), IntegralError);
}
