// Small exact linear algebra over Q(q): fraction-free rank and span
// membership, enough for the spanning-set lemmas and the oracle regression.
#pragma once

#include <vector>

#include "iqg/qscalar.hpp"

namespace iqg {

using QMatrix = std::vector<std::vector<QScalar>>;
using PolyMatrix = std::vector<std::vector<LaurentPoly>>;

// clear denominators row by row (a nonzero row scale preserves rank)
PolyMatrix to_poly_matrix(const QMatrix& m);

// fraction-free (Bareiss) row echelon rank; destroys its argument
long poly_matrix_rank(PolyMatrix m);
long qmatrix_rank(const QMatrix& m);

// true iff b lies in the column span of A
bool in_column_span(const QMatrix& A, const std::vector<QScalar>& b);

}  // namespace iqg
