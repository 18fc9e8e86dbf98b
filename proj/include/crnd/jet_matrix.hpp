#pragma once

#include "crnd/jet.hpp"
#include "crnd/linalg.hpp"

#include <stdexcept>
#include <vector>

namespace crnd {

/// Dense matrix of jets over one space.
class JetMatrix {
public:
    JetMatrix(SpacePtr space, std::size_t rows, std::size_t cols, int order)
        : space_(std::move(space)), rows_(rows), cols_(cols)
    {
        if (rows * cols > 0) entries_.assign(rows * cols, Jet(space_, order));
    }

    static JetMatrix identity(SpacePtr space, std::size_t n, int order)
    {
        JetMatrix m(std::move(space), n, n, order);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Jet::constant(m.space_, order, 1);
        return m;
    }

    static JetMatrix from_scalars(SpacePtr space, const Matrix& a, int order)
    {
        const std::size_t r = a.size();
        const std::size_t c = r == 0 ? 0 : a[0].size();
        JetMatrix m(std::move(space), r, c, order);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = Jet::constant(m.space_, order, a[i][j]);
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] const SpacePtr& space() const noexcept { return space_; }

    Jet& operator()(std::size_t i, std::size_t j) { return entries_.at(i * cols_ + j); }
    const Jet& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * cols_ + j); }

    [[nodiscard]] std::vector<Jet> row(std::size_t i) const
    {
        return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    [[nodiscard]] int order() const
    {
        int k = entries_.empty() ? 0 : entries_.front().order();
        for (const auto& e : entries_) k = std::min(k, e.order());
        return k;
    }

    [[nodiscard]] Matrix eval0() const
    {
        Matrix m(rows_, Row(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m[i][j] = (*this)(i, j).eval0();
        return m;
    }

    [[nodiscard]] JetMatrix transpose() const
    {
        JetMatrix t(space_, cols_, rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) { return zip(a, b, false); }
    friend JetMatrix operator-(const JetMatrix& a, const JetMatrix& b) { return zip(a, b, true); }

    friend JetMatrix operator*(const Scalar& c, const JetMatrix& a)
    {
        JetMatrix r = a;
        for (auto& e : r.entries_) e = c * e;
        return r;
    }

    friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b)
    {
        if (a.cols_ != b.rows_) throw std::invalid_argument("JetMatrix product: shape mismatch");
        if (!same_space(a.space_, b.space_)) throw SpaceMismatch("JetMatrix product: variable spaces differ");
        const int k = std::min(a.order(), b.order());
        JetMatrix r(a.space_, a.rows_, b.cols_, k);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                Jet acc(a.space_, k);
                for (std::size_t l = 0; l < a.cols_; ++l) {
                    const Jet& x = a(i, l);
                    const Jet& y = b(l, j);
                    if (x.is_zero() && x.exact()) continue;
                    if (y.is_zero() && y.exact()) continue;
                    acc += x * y;
                }
                r(i, j) = std::move(acc);
            }
        return r;
    }

    friend bool operator==(const JetMatrix& a, const JetMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

    /// Inverse of a square matrix whose constant part is invertible: the constant part is
    /// inverted exactly, the remainder by a truncated Neumann series.
    [[nodiscard]] JetMatrix invert_unit() const
    {
        if (rows_ != cols_) throw std::invalid_argument("matrix_invert_unit: matrix is not square");
        const int k = order();
        Matrix c0inv;
        try {
            c0inv = inverse(eval0());
        } catch (const SingularMatrix&) {
            throw SingularMatrix("matrix_invert_unit: constant part is singular");
        }
        const JetMatrix c0inv_j = from_scalars(space_, c0inv, k);
        const JetMatrix id = identity(space_, rows_, k);
        // A = C0 (I + U), A^-1 = (I + U)^-1 C0^-1.
        const JetMatrix u = c0inv_j * *this - id;
        bool trivial = true;
        bool exact = true;
        for (const auto& e : u.entries_) {
            if (!e.is_zero()) trivial = false;
            if (!e.exact()) exact = false;
        }
        if (trivial) {
            JetMatrix r = c0inv_j;
            if (!exact)
                for (auto& e : r.entries_) e = e.with_exact(false);
            return r;
        }
        JetMatrix r = id;
        for (int pass = 0; pass < k; ++pass) r = id - u * r;
        JetMatrix out = r * c0inv_j;
        for (auto& e : out.entries_) e = e.with_exact(false);
        return out;
    }

private:
    static JetMatrix zip(const JetMatrix& a, const JetMatrix& b, bool subtract)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("JetMatrix: shape mismatch");
        JetMatrix r = a;
        for (std::size_t i = 0; i < r.entries_.size(); ++i)
            r.entries_[i] = subtract ? a.entries_[i] - b.entries_[i] : a.entries_[i] + b.entries_[i];
        return r;
    }

    SpacePtr space_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Jet> entries_;
};

}  // namespace crnd
