#include "nilgraph/classifier.hpp"

#include <algorithm>

namespace nilgraph {

std::string to_string(SingularityType t) {
  switch (t) {
    case SingularityType::NonSingular: return "NonSingular";
    case SingularityType::AlmostNonSingular: return "AlmostNonSingular";
    case SingularityType::Singular: return "Singular";
  }
  return "?";
}

std::string to_string(Verdict v) { return v == Verdict::NonIntegrable ? "NonIntegrable" : "NotObstructed"; }

DenseMatrix<Poly> symbolic_j(const GraphAlgebra& alg) {
  std::vector<std::string> names;
  for (int k = 0; k < alg.dim_z(); ++k) names.push_back("a" + std::to_string(k + 1));
  // Fraction-free elimination forms products of two degree-m entries.
  VarsPtr vars = make_variables(std::move(names), 2 * alg.dim_v());
  std::vector<Poly> z;
  for (int k = 0; k < alg.dim_z(); ++k) z.push_back(Poly::variable(vars, k));
  return j_map(alg, z);
}

SingularityType classify_singularity(const GraphAlgebra& alg) {
  if (alg.dim_v() % 2 == 1) return SingularityType::Singular;
  if (pfaffian_poly(symbolic_j(alg)).is_zero()) return SingularityType::Singular;
  if (isomorphic(alg.graph(), generate_named("K", 2))) return SingularityType::NonSingular;
  return SingularityType::AlmostNonSingular;
}

RationalMatrix j_matrix(const GraphAlgebra& alg, const std::vector<Rational>& z) { return j_map(alg, z); }

std::vector<AlgebraVector<Rational>> isotropy_subspace(const GraphAlgebra& alg, const std::vector<Rational>& z,
                                                       const std::vector<Rational>& v) {
  if (static_cast<int>(z.size()) != alg.dim_z() || static_cast<int>(v.size()) != alg.dim_v())
    throw AlgebraError("isotropy_subspace: coordinate lengths do not match the algebra");
  std::vector<AlgebraVector<Rational>> out;
  bool z_zero = std::all_of(z.begin(), z.end(), [](const Rational& x) { return x == 0; });
  if (z_zero) {
    for (int i = 0; i < alg.dim(); ++i) out.push_back(alg.basis(i));
    return out;
  }
  for (int k = 0; k < alg.dim_z(); ++k) out.push_back(alg.center(k));
  for (auto& u : nullspace(j_matrix(alg, z))) {
    AlgebraVector<Rational> x = alg.zero(Rational(0));
    x.v = std::move(u);
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

struct Sample {
  std::vector<Rational> z;
  std::vector<RationalVector> kernel;
};

AlgebraVector<Rational> in_v(const GraphAlgebra& alg, const RationalVector& u) {
  AlgebraVector<Rational> x = alg.zero(Rational(0));
  x.v = u;
  return x;
}

bool all_zero(const std::vector<Rational>& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& a) { return a == 0; });
}

}  // namespace

ObstructionReport non_integrability_test(const GraphAlgebra& alg, int sample_count, std::uint64_t seed) {
  if (sample_count < 16) throw std::invalid_argument("non_integrability_test needs at least 16 samples");
  RationalSampler draw(seed);
  std::vector<Sample> samples;
  samples.reserve(sample_count);
  for (int s = 0; s < sample_count; ++s) {
    Sample smp;
    do {
      smp.z.clear();
      for (int k = 0; k < alg.dim_z(); ++k) smp.z.push_back(draw());
    } while (all_zero(smp.z));
    smp.kernel = nullspace(j_matrix(alg, smp.z));
    samples.push_back(std::move(smp));
  }

  ObstructionReport report;
  report.samples_used = sample_count;
  report.seed = seed;
  std::size_t min_kernel = samples.front().kernel.size();
  for (const auto& s : samples) min_kernel = std::min(min_kernel, s.kernel.size());
  report.generic_kernel_dim = static_cast<int>(min_kernel);

  std::vector<std::size_t> regular;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].kernel.size() == min_kernel) regular.push_back(i);

  int best = -1;
  std::optional<ObstructionWitness> first_nonzero;
  for (std::size_t a = 0; a < regular.size(); ++a)
    for (std::size_t b = a + 1; b < regular.size(); ++b) {
      const Sample& s = samples[regular[a]];
      const Sample& t = samples[regular[b]];
      ++report.minimal_pairs;
      std::vector<RationalVector> span;
      for (const auto& u : s.kernel)
        for (const auto& w : t.kernel) {
          auto br = bracket(alg, in_v(alg, u), in_v(alg, w)).z;
          if (!all_zero(br)) {
            if (!first_nonzero) first_nonzero = ObstructionWitness{s.z, t.z, u, w, br};
            span.push_back(std::move(br));
          }
        }
      int dim = static_cast<int>(row_reduce_basis(span).size());
      best = best < 0 ? dim : std::min(best, dim);
    }
  report.generic_bracket_dim = std::max(best, 0);

  if (report.generic_bracket_dim > 0 && first_nonzero) {
    const int generic_rank = alg.dim_v() - report.generic_kernel_dim;
    if (!verify_witness(alg, *first_nonzero, generic_rank))
      throw std::logic_error("obstruction witness failed exact verification");
    report.verdict = Verdict::NonIntegrable;
    report.witness = std::move(first_nonzero);
  }
  return report;
}

bool verify_witness(const GraphAlgebra& alg, const ObstructionWitness& w, int generic_rank) {
  if (static_cast<int>(w.z.size()) != alg.dim_z() || static_cast<int>(w.z_tilde.size()) != alg.dim_z()) return false;
  if (static_cast<int>(w.u.size()) != alg.dim_v() || static_cast<int>(w.u_tilde.size()) != alg.dim_v()) return false;
  if (all_zero(w.u) || all_zero(w.u_tilde)) return false;
  const Rational zero(0);
  RationalMatrix j1 = j_matrix(alg, w.z), j2 = j_matrix(alg, w.z_tilde);
  if (!all_zero(apply(j1, w.u, zero)) || !all_zero(apply(j2, w.u_tilde, zero))) return false;
  if (static_cast<int>(rank(j1)) != generic_rank || static_cast<int>(rank(j2)) != generic_rank) return false;
  // Expand [u, u~] directly from the structure constants.
  std::vector<Rational> br(alg.dim_z(), Rational(0));
  for (int k = 0; k < alg.dim_z(); ++k)
    for (int i = 0; i < alg.dim_v(); ++i)
      for (int j = 0; j < alg.dim_v(); ++j)
        if (int c = alg.structure_constant(k, i, j)) br[k] += c * w.u[i] * w.u_tilde[j];
  return !all_zero(br) && br == w.bracket;
}

ObstructionWitness complete_graph_witness(const GraphAlgebra& alg) {
  const int n = alg.dim_v();
  if (n % 2 == 0 || n < 3 || !isomorphic(alg.graph(), generate_named("K", n)))
    throw AlgebraError("complete_graph_witness needs an odd complete graph");
  const int k = (n - 1) / 2;
  auto basis_bracket = [&](int i, int j) { return bracket(alg, alg.vertex(i), alg.vertex(j)).z; };
  std::vector<Rational> z(alg.dim_z(), Rational(0)), zt(alg.dim_z(), Rational(0));
  for (int i = 1; i <= k; ++i) {
    auto a = basis_bracket(2 * i - 2, 2 * i - 1);  // Z_{2i-1,2i}
    auto b = basis_bracket(2 * i - 1, 2 * i);      // Z_{2i,2i+1}
    for (int q = 0; q < alg.dim_z(); ++q) {
      z[q] += a[q];
      zt[q] += b[q];
    }
  }
  RationalVector u(n, Rational(0)), ut(n, Rational(0));
  u[n - 1] = 1;
  ut[0] = 1;
  return {z, zt, u, ut, basis_bracket(n - 1, 0)};
}

}  // namespace nilgraph
