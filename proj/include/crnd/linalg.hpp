#pragma once

// Dense exact linear algebra over ComplexScalar: rows are plain vectors.

#include "crnd/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace crnd {

using Row = std::vector<Scalar>;
using Matrix = std::vector<Row>;

class SingularMatrix : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline Matrix identity_matrix(std::size_t n)
{
    Matrix m(n, Row(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline bool is_zero_row(const Row& r)
{
    for (const auto& x : r)
        if (!x.is_zero()) return false;
    return true;
}

inline Matrix matmul(const Matrix& a, const Matrix& b)
{
    const std::size_t inner = b.size();
    const std::size_t cols = inner == 0 ? 0 : b[0].size();
    Matrix c(a.size(), Row(cols));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != inner) throw std::invalid_argument("matmul: shape mismatch");
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    }
    return c;
}

/// Row vector times matrix.
inline Row row_times(const Row& v, const Matrix& m)
{
    return matmul(Matrix{v}, m).front();
}

/// Gauss-Jordan inverse; throws SingularMatrix.
inline Matrix inverse(Matrix a)
{
    const std::size_t n = a.size();
    Matrix inv = identity_matrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw SingularMatrix("matrix is singular");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const Scalar s = a[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= s;
            inv[col][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Scalar f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/// Incrementally maintained reduced row-echelon basis of a subspace of K^width.
class RowBasis {
public:
    explicit RowBasis(std::size_t width) : width_(width) {}

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
    [[nodiscard]] bool full() const noexcept { return rows_.size() == width_; }

    /// Residual of v after elimination against the basis; zero iff v is in the span.
    [[nodiscard]] Row reduce(Row v) const
    {
        if (v.size() != width_) throw std::invalid_argument("RowBasis: width mismatch");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Scalar f = v[pivots_[i]];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < width_; ++j)
                if (!rows_[i][j].is_zero()) v[j] -= f * rows_[i][j];
        }
        return v;
    }

    [[nodiscard]] bool contains(const Row& v) const { return is_zero_row(reduce(v)); }

    /// Adds v; returns true iff the rank grew.
    bool insert(const Row& v)
    {
        Row r = reduce(v);
        std::size_t p = 0;
        while (p < width_ && r[p].is_zero()) ++p;
        if (p == width_) return false;
        const Scalar s = r[p].inverse();
        for (auto& x : r) x *= s;
        for (auto& row : rows_) {
            const Scalar f = row[p];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < width_; ++j) row[j] -= f * r[j];
        }
        // Keep rows sorted by pivot so the echelon form is canonical.
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
        pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
        return true;
    }

    /// Canonical reduced row-echelon rows; equal subspaces give equal results.
    [[nodiscard]] const Matrix& rows() const noexcept { return rows_; }
    [[nodiscard]] const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

private:
    std::size_t width_;
    Matrix rows_;
    std::vector<std::size_t> pivots_;
};

inline RowBasis row_space(const Matrix& rows, std::size_t width)
{
    RowBasis b(width);
    for (const auto& r : rows) b.insert(r);
    return b;
}

inline std::size_t rank(const Matrix& rows, std::size_t width) { return row_space(rows, width).rank(); }

inline bool same_row_space(const Matrix& a, const Matrix& b, std::size_t width)
{
    return row_space(a, width).rows() == row_space(b, width).rows();
}

}  // namespace crnd
