#include "gmf/linalg.hpp"

#include <cassert>

namespace gmf {

QMat qmat_zero(size_t rows, size_t cols) {
    return QMat(rows, QVec(cols, Rational(0)));
}

QMat qmat_identity(size_t n) {
    QMat m = qmat_zero(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat qmat_mul(const QMat& a, const QMat& b) {
    size_t rows = a.size();
    size_t inner = b.size();
    size_t cols = inner ? b[0].size() : 0;
    QMat out = qmat_zero(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        assert(a[i].size() == inner);
        for (size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < cols; ++j) {
                if (b[k][j] == 0) continue;
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

bool qmat_is_zero(const QMat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

Echelon rref(QMat a) {
    Echelon e;
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        Rational inv = a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] /= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        e.pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    e.rank = static_cast<int>(r);
    e.mat = std::move(a);
    return e;
}

int rank(const QMat& a) {
    if (a.empty()) return 0;
    return rref(a).rank;
}

std::vector<QVec> kernel_basis(const QMat& a, size_t cols) {
    if (cols == 0) return {};
    if (a.empty()) {
        // No constraints: the whole space.
        std::vector<QVec> basis;
        for (size_t j = 0; j < cols; ++j) {
            QVec v(cols, Rational(0));
            v[j] = 1;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    Echelon e = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (int c : e.pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<QVec> basis;
    for (size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(cols, Rational(0));
        v[free] = 1;
        for (int pr = 0; pr < e.rank; ++pr) {
            size_t pc = static_cast<size_t>(e.pivot_col[static_cast<size_t>(pr)]);
            v[pc] = -e.mat[static_cast<size_t>(pr)][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVec> solve(const QMat& a, const QVec& b) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    if (rows == 0) return QVec(cols, Rational(0));
    QMat aug = a;
    for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    Echelon e = rref(std::move(aug));
    QVec x(cols, Rational(0));
    for (int pr = 0; pr < e.rank; ++pr) {
        size_t pc = static_cast<size_t>(e.pivot_col[static_cast<size_t>(pr)]);
        if (pc == cols) return std::nullopt;  // pivot in the rhs column: inconsistent
        x[pc] = e.mat[static_cast<size_t>(pr)][cols];
    }
    return x;
}

bool in_column_span(const QMat& a, const QVec& v) {
    // Solve a^T-style: columns of a span v?
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    if (rows != v.size()) return false;
    if (cols == 0) {
        for (const auto& x : v)
            if (x != 0) return false;
        return true;
    }
    return solve(a, v).has_value();
}

}  // namespace gmf
