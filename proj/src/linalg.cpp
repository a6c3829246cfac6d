#include "qgeom/linalg.hpp"

namespace qgeom {

Matrix zero_matrix(size_t rows, size_t cols) { return Matrix(rows, Vec(cols)); }

Matrix identity_matrix(size_t n) {
    Matrix m = zero_matrix(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = Scalar(1);
    return m;
}

Matrix mat_mul(const Matrix &a, const Matrix &b) {
    size_t inner = b.size(), cols = b.empty() ? 0 : b[0].size();
    Matrix r = zero_matrix(a.size(), cols);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < cols; ++j)
                if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

Matrix mat_add(const Matrix &a, const Matrix &b) {
    Matrix r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
    return r;
}

Matrix mat_scale(const Scalar &s, const Matrix &a) {
    Matrix r = a;
    for (auto &row : r)
        for (auto &x : row) x = s * x;
    return r;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    size_t ar = a.size(), ac = ar ? a[0].size() : 0, br = b.size(), bc = br ? b[0].size() : 0;
    Matrix r = zero_matrix(ar * br, ac * bc);
    for (size_t i = 0; i < ar; ++i)
        for (size_t j = 0; j < ac; ++j) {
            if (a[i][j].is_zero()) continue;
            for (size_t k = 0; k < br; ++k)
                for (size_t l = 0; l < bc; ++l) r[i * br + k][j * bc + l] = a[i][j] * b[k][l];
        }
    return r;
}

Matrix conj_transpose(const Matrix &a) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    Matrix r = zero_matrix(cols, rows);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) r[j][i] = a[i][j].conj();
    return r;
}

bool mat_equal(const Matrix &a, const Matrix &b) { return a == b; }

bool is_zero_matrix(const Matrix &a) {
    for (auto &row : a)
        for (auto &x : row)
            if (!x.is_zero()) return false;
    return true;
}

RowEchelon rref(Matrix a) {
    RowEchelon e;
    size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Scalar inv = a[r][c].inv();
        for (size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Scalar f = a[i][c];
            for (size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        e.pivots.push_back(c);
        ++r;
    }
    e.r = std::move(a);
    return e;
}

size_t rank(const Matrix &a) { return rref(a).rank(); }

std::vector<Vec> nullspace(const Matrix &a, size_t cols) {
    RowEchelon e = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (size_t p : e.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec v(cols);
        v[f] = Scalar(1);
        for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.r[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve(const Matrix &a, const Vec &b, size_t cols) {
    Matrix aug = a;
    for (size_t i = 0; i < aug.size(); ++i) {
        aug[i].resize(cols);
        aug[i].push_back(b[i]);
    }
    RowEchelon e = rref(aug);
    Vec x(cols);
    for (size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == cols) return std::nullopt; // inconsistent
        x[e.pivots[i]] = e.r[i][cols];
    }
    return x;
}

Matrix inverse(const Matrix &a) {
    size_t n = a.size();
    if (n == 0) return {};
    Matrix aug = a;
    for (size_t i = 0; i < n; ++i) {
        aug[i].resize(2 * n);
        aug[i][n + i] = Scalar(1);
    }
    RowEchelon e = rref(aug);
    if (e.rank() < n || e.pivots[n - 1] >= n) throw Error("singular matrix");
    Matrix r = zero_matrix(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r[i][j] = e.r[i][n + j];
    return r;
}

Scalar determinant(Matrix a) {
    size_t n = a.size();
    Scalar det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return Scalar();
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        Scalar inv = a[c][c].inv();
        for (size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero()) continue;
            Scalar f = a[i][c] * inv;
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

std::string matrix_str(const Matrix &a) {
    std::string s = "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += "; ";
        for (size_t j = 0; j < a[i].size(); ++j) s += (j ? ", " : "") + a[i][j].str();
    }
    return s + "]";
}

} // namespace qgeom
