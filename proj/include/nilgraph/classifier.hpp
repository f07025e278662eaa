#pragma once

#include "nilgraph/algebra.hpp"
#include "nilgraph/exact_linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nilgraph {

enum class SingularityType { NonSingular, AlmostNonSingular, Singular };

std::string to_string(SingularityType t);

/// j(a_1 Z_1 + ... + a_q Z_q) with symbolic center coefficients a_k.
DenseMatrix<Poly> symbolic_j(const GraphAlgebra& alg);

SingularityType classify_singularity(const GraphAlgebra& alg);

/// Basis of the coadjoint isotropy algebra of the functional <V + Z, .>:
/// all of n when Z = 0, otherwise z (+) ker j(Z). V does not enter.
std::vector<AlgebraVector<Rational>> isotropy_subspace(const GraphAlgebra& alg, const std::vector<Rational>& z,
                                                       const std::vector<Rational>& v);

struct ObstructionWitness {
  std::vector<Rational> z;
  std::vector<Rational> z_tilde;
  RationalVector u;        ///< in ker j(z)
  RationalVector u_tilde;  ///< in ker j(z_tilde)
  std::vector<Rational> bracket;  ///< center part of [u, u_tilde]
};

enum class Verdict { NonIntegrable, NotObstructed };

std::string to_string(Verdict v);

struct ObstructionReport {
  Verdict verdict = Verdict::NotObstructed;
  std::optional<ObstructionWitness> witness;
  int generic_kernel_dim = 0;
  /// Smallest dim [n_lambda, n_mu] over pairs of distinct minimal-kernel samples.
  int generic_bracket_dim = 0;
  int minimal_pairs = 0;
  int samples_used = 0;
  std::uint64_t seed = 0;
};

/// Seeded search for a certified obstruction to integrability on compact quotients.
/// NonIntegrable is certified by an exactly verified witness; NotObstructed is a
/// probabilistic verdict over the recorded samples.
ObstructionReport non_integrability_test(const GraphAlgebra& alg, int sample_count, std::uint64_t seed);

/// Independent re-check of a witness: u and u_tilde are nonzero kernel vectors,
/// both j-maps have rank `generic_rank`, and [u, u_tilde] equals the stored nonzero value.
bool verify_witness(const GraphAlgebra& alg, const ObstructionWitness& w, int generic_rank);

/// Witness for K_{2k+1}: Z = sum Z_{2i-1,2i} with kernel vector V_{2k+1},
/// Z~ = sum Z_{2i,2i+1} with kernel vector V_1; their bracket is Z_{1,2k+1}.
ObstructionWitness complete_graph_witness(const GraphAlgebra& alg);

RationalMatrix j_matrix(const GraphAlgebra& alg, const std::vector<Rational>& z);

}  // namespace nilgraph
