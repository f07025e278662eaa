#pragma once

#include "nilgraph/matrix.hpp"
#include "nilgraph/rational.hpp"

#include <vector>

namespace nilgraph {

using RationalMatrix = DenseMatrix<Rational>;
using RationalVector = std::vector<Rational>;

struct EchelonForm {
  RationalMatrix matrix;
  std::vector<std::size_t> pivot_columns;
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
EchelonForm rref(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// Basis of {x : m x = 0}; one vector per free column, with that column set to 1.
std::vector<RationalVector> nullspace(const RationalMatrix& m);

/// Stacks vectors as rows and returns the nonzero rows of their reduced echelon form.
std::vector<RationalVector> row_reduce_basis(const std::vector<RationalVector>& rows);

}  // namespace nilgraph
