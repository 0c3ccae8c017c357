#include "gwp/linalg.hpp"

#include <utility>

namespace gwp {

Matrix identity_matrix(std::size_t n) {
    Matrix m(n, Vector(n));
    for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
    return m;
}

Matrix transpose(const Matrix& m) {
    if (m.empty()) return {};
    Matrix t(m[0].size(), Vector(m.size()));
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m[r].size(); ++c) t[c][r] = m[r][c];
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.empty()) return {};
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Matrix out(n, Vector(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

namespace {

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<std::size_t> rref(Matrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col].is_zero()) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        const GaussianRational scale = m[row][col].inv();
        for (auto& x : m[row]) x *= scale;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            const GaussianRational f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<Vector> nullspace(const Matrix& m, std::size_t cols) {
    Matrix work = m;
    for (auto& r : work) r.resize(cols);
    const auto pivots = rref(work, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;

    std::vector<Vector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vector v(cols);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -work[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Matrix> inverse(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix aug(n, Vector(2 * n));
    for (std::size_t r = 0; r < n; ++r) {
        if (m[r].size() != n) return std::nullopt;
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = m[r][c];
        aug[r][n + r] = 1;
    }
    const auto pivots = rref(aug, n);
    if (pivots.size() != n) return std::nullopt;
    Matrix out(n, Vector(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out[r][c] = aug[r][n + c];
    return out;
}

}  // namespace gwp
