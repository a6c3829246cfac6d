// Exact dense linear algebra over Scalar (Gaussian elimination).
#pragma once

#include "qgeom/scalar.hpp"

#include <optional>
#include <vector>

namespace qgeom {

using Vec = std::vector<Scalar>;
using Matrix = std::vector<Vec>; // row-major, m[row][col]

Matrix zero_matrix(size_t rows, size_t cols);
Matrix identity_matrix(size_t n);
Matrix mat_mul(const Matrix &a, const Matrix &b);
Matrix mat_add(const Matrix &a, const Matrix &b);
Matrix mat_scale(const Scalar &s, const Matrix &a);
Matrix kron(const Matrix &a, const Matrix &b);
Matrix conj_transpose(const Matrix &a);
bool mat_equal(const Matrix &a, const Matrix &b);
bool is_zero_matrix(const Matrix &a);

struct RowEchelon {
    Matrix r;                 // reduced row echelon form
    std::vector<size_t> pivots; // pivot column of each nonzero row
    size_t rank() const { return pivots.size(); }
};

RowEchelon rref(Matrix a);
size_t rank(const Matrix &a);
/** Basis of {x : a x = 0}; one vector per free column, in column order. */
std::vector<Vec> nullspace(const Matrix &a, size_t cols);
/** A particular solution of a x = b (free variables 0), or nullopt. */
std::optional<Vec> solve(const Matrix &a, const Vec &b, size_t cols);
Matrix inverse(const Matrix &a); // throws Error if singular
Scalar determinant(Matrix a);
std::string matrix_str(const Matrix &a);

} // namespace qgeom
