#include "iqg/qlinalg.hpp"

namespace iqg {

PolyMatrix to_poly_matrix(const QMatrix& m) {
    PolyMatrix out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(clear_denominators(row));
    return out;
}

long poly_matrix_rank(PolyMatrix m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    LaurentPoly prev(1);
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pivot = r;
        while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                LaurentPoly v = m[i][j] * m[r][c] - m[i][c] * m[r][j];
                m[i][j] = v.is_zero() ? LaurentPoly()
                                      : LaurentPoly::div_exact(v, prev);
            }
            m[i][c] = LaurentPoly();
        }
        prev = m[r][c];
        ++r;
    }
    return static_cast<long>(r);
}

long qmatrix_rank(const QMatrix& m) { return poly_matrix_rank(to_poly_matrix(m)); }

bool in_column_span(const QMatrix& A, const std::vector<QScalar>& b) {
    if (A.size() != b.size()) throw std::runtime_error("in_column_span: shape");
    QMatrix aug = A;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    return qmatrix_rank(A) == qmatrix_rank(aug);
}

}  // namespace iqg
