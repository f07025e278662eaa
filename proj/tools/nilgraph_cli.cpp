// nilgraph: classification, first integrals, geodesics and star quotients for
// 2-step nilpotent algebras built from directed graphs.

#include "nilgraph/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace nilgraph;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kInternalError = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      if constexpr (std::is_same_v<T, double>)
        out.push_back(std::stod(item, &used));
      else
        out.push_back(std::stol(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) throw InputError(std::string("malformed ") + what + ": '" + s + "'");
  }
  if (out.empty()) throw InputError(std::string("empty ") + what);
  return out;
}

DirectedGraph load_graph(const std::string& named, const std::string& file) {
  if (!named.empty() && !file.empty()) throw InputError("give either --named or --graph, not both");
  if (!named.empty()) return generate_named(named);
  if (file.empty()) throw InputError("a graph is required (--named or --graph)");
  std::ifstream in(file);
  if (!in) throw InputError("cannot read graph file '" + file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic-flow integrability toolkit for graph nilpotent groups"};
  app.require_subcommand(1);

  std::string named, graph_file, json_path;
  bool human = false, timing = false;
  std::uint64_t seed = 0;
  int samples = 64;

  auto common = [&](CLI::App* sub, bool needs_graph) {
    if (needs_graph) {
      sub->add_option("--named", named, "named graph: K<n>, S<k>, P<n>, C<n>, G1, G2");
      sub->add_option("--graph", graph_file, "graph file ('vertices n' then 'edge i j' lines, 1-based)");
    }
    sub->add_option("--json", json_path, "write the JSON report to this path ('-' for stdout)");
    sub->add_flag("--human", human, "print the plain-text report even when --json is given");
    sub->add_option("--seed", seed, "seed for every randomized procedure")->capture_default_str();
    sub->add_option("--samples", samples, "random samples for probabilistic checks")->capture_default_str();
    sub->add_flag("--timing", timing, "include per-section wall time in the report");
  };

  auto* classify = app.add_subcommand("classify", "singularity type and the compact-quotient obstruction");
  common(classify, true);

  std::string families;
  auto* integrals = app.add_subcommand("integrals", "first integrals, involution table and gradient rank");
  common(integrals, true);
  integrals->add_option("--families", families, "comma list of energy,center,butler,killing,quadratic,k3");

  std::string y0_text, w0_text, csv_path, method = "closed";
  double t_end = 10.0, step = 1e-3;
  auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic and report integral drift");
  common(geodesic, true);
  geodesic->add_option("--y0", y0_text, "initial velocity, comma separated (vertices then edges)")->required();
  geodesic->add_option("--w0", w0_text, "initial position in exponential coordinates (default: identity)");
  geodesic->add_option("--t", t_end, "final time")->capture_default_str();
  geodesic->add_option("--step", step, "RK4 step")->capture_default_str();
  geodesic->add_option("--method", method, "closed (closed-form velocity) or rk4")->capture_default_str();
  geodesic->add_option("--csv", csv_path, "write the trajectory CSV here ('-' for stdout)");

  int k = 1;
  long r = 1;
  std::string m_text, rvec_text;
  auto* quotient = app.add_subcommand("quotient-check", "lattice and smooth-integral checks on star quotients");
  common(quotient, false);
  quotient->add_option("--k", k, "star parameter (k leaves)")->required();
  quotient->add_option("--r", r, "lattice parameter r")->capture_default_str();
  quotient->add_option("--rvec", rvec_text, "r_1..r_k, comma separated (default: all equal to r)");
  quotient->add_option("--m", m_text, "m_1..m_k, comma separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  Json report;
  GeodesicTrajectory traj;
  bool have_traj = false;
  try {
    if (samples < 16) throw InputError("--samples must be at least 16");
    if (csv_path == "-" && json_path == "-") throw InputError("--csv and --json cannot both go to stdout");
    CommonOptions opt{seed, samples, timing};
    if (classify->parsed()) {
      report = run_classify(GraphAlgebra(load_graph(named, graph_file)), opt);
    } else if (integrals->parsed()) {
      IntegralsOptions iopt;
      iopt.families = parse_families(families);
      report = run_integrals(GraphAlgebra(load_graph(named, graph_file)), opt, iopt);
    } else if (geodesic->parsed()) {
      GeodesicOptions g;
      g.y0 = parse_list<double>(y0_text, "--y0");
      if (!w0_text.empty()) g.w0 = parse_list<double>(w0_text, "--w0");
      g.t_end = t_end;
      g.step = step;
      if (method == "closed")
        g.method = FlowMethod::ClosedFormVelocity;
      else if (method == "rk4")
        g.method = FlowMethod::FullRK4;
      else
        throw InputError("--method must be 'closed' or 'rk4'");
      report = run_geodesic(GraphAlgebra(load_graph(named, graph_file)), opt, g, &traj);
      have_traj = true;
    } else {
      QuotientOptions q;
      q.k = k;
      q.r = r;
      q.m_vec = parse_list<long>(m_text, "--m");
      if (!rvec_text.empty()) q.r_vec = parse_list<long>(rvec_text, "--rvec");
      report = run_quotient(opt, q);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const QuotientError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const FlowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const IntegralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const AlgebraError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PolyError& e) {
    std::cerr << "error: input exceeds supported size: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }

  try {
    bool stdout_used = false;
    if (have_traj && !csv_path.empty()) {
      if (csv_path == "-") {
        write_csv(std::cout, traj);
        stdout_used = true;
      } else {
        std::ofstream out(csv_path);
        if (!out) throw InputError("cannot write '" + csv_path + "'");
        write_csv(out, traj);
      }
    }
    if (!json_path.empty()) {
      const std::string text = report.dump(2) + "\n";
      if (json_path == "-") {
        std::cout << text;
        stdout_used = true;
      } else {
        std::ofstream out(json_path);
        if (!out) throw InputError("cannot write '" + json_path + "'");
        out << text;
      }
    }
    if (human || (json_path.empty() && !stdout_used)) (stdout_used ? std::cerr : std::cout) << render_human(report);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return all_checks_pass(report) ? kOk : kCheckFailed;
}
