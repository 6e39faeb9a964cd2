#pragma once

#include "gmf/rational.hpp"

#include <optional>
#include <vector>

namespace gmf {

// Dense matrices over the exact rationals. Sizes stay at desk scale, so a
// plain row-major layout with exact elimination is enough.
using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

QMat qmat_zero(size_t rows, size_t cols);
QMat qmat_identity(size_t n);
QMat qmat_mul(const QMat& a, const QMat& b);
bool qmat_is_zero(const QMat& a);

struct Echelon {
    QMat mat;                    // reduced row echelon form
    std::vector<int> pivot_col;  // one entry per pivot row
    int rank = 0;
};

Echelon rref(QMat a);

int rank(const QMat& a);

// Basis of the right kernel {v : a v = 0}, deterministic order.
std::vector<QVec> kernel_basis(const QMat& a, size_t cols);

// One exact solution of a x = b, if any.
std::optional<QVec> solve(const QMat& a, const QVec& b);

// Does v lie in the column span of a?
bool in_column_span(const QMat& a, const QVec& v);

}  // namespace gmf
