#pragma once

#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympquot/scalar.hpp"

namespace sympquot {

/// Dense matrix of exact rationals. Degenerate shapes (0 rows or 0
/// columns) are allowed; kernels of injective maps are empty matrices.
class ScalarMatrix {
public:
    ScalarMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<size_t>(check(rows) * check(cols))) {}

    static ScalarMatrix identity(int n) {
        ScalarMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
        return m;
    }

    static ScalarMatrix from_rows(std::vector<std::vector<Scalar>> rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
        ScalarMatrix m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c)
                throw std::invalid_argument("ScalarMatrix: ragged rows");
            for (int j = 0; j < c; ++j) m.at(i, j) = std::move(rows[i][j]);
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Scalar& at(int i, int j) const { return e_[index(i, j)]; }
    Scalar& at(int i, int j) { return e_[index(i, j)]; }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const ScalarMatrix& a, const ScalarMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const ScalarMatrix& a, const ScalarMatrix& b) { return !(a == b); }

    friend ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("ScalarMatrix: shape mismatch in product");
        ScalarMatrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    if (b.at(k, j).is_zero()) continue;
                    r.at(i, j) += a.at(i, k) * b.at(k, j);
                }
            }
        return r;
    }
    friend ScalarMatrix operator+(const ScalarMatrix& a, const ScalarMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("ScalarMatrix: shape mismatch in sum");
        ScalarMatrix r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
        return r;
    }
    friend ScalarMatrix operator-(const ScalarMatrix& a, const ScalarMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("ScalarMatrix: shape mismatch in difference");
        ScalarMatrix r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] - b.e_[i];
        return r;
    }
    ScalarMatrix operator-() const {
        ScalarMatrix r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = -e_[i];
        return r;
    }

    ScalarMatrix transpose() const {
        ScalarMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    /// Reduced row echelon form plus the pivot column indices. Pivot is
    /// the first nonzero entry below the current row, lowest row wins.
    std::pair<ScalarMatrix, std::vector<int>> rref() const {
        ScalarMatrix m = *this;
        std::vector<int> pivots;
        int row = 0;
        for (int col = 0; col < cols_ && row < rows_; ++col) {
            int p = -1;
            for (int i = row; i < rows_; ++i)
                if (!m.at(i, col).is_zero()) { p = i; break; }
            if (p < 0) continue;
            if (p != row)
                for (int j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(row, j));
            const Scalar inv = m.at(row, col).inverse();
            for (int j = col; j < cols_; ++j) m.at(row, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == row || m.at(i, col).is_zero()) continue;
                const Scalar f = m.at(i, col);
                for (int j = col; j < cols_; ++j) m.at(i, j) -= f * m.at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return {std::move(m), std::move(pivots)};
    }

    int rank() const { return static_cast<int>(rref().second.size()); }

    /// Columns form a basis of the right kernel; each basis vector is
    /// scaled so its first nonzero coordinate is 1. Column count is
    /// cols() - rank() always.
    ScalarMatrix kernel_basis() const {
        auto [m, pivots] = rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int p : pivots) is_pivot[p] = true;
        ScalarMatrix k(cols_, cols_ - static_cast<int>(pivots.size()));
        int out = 0;
        for (int f = 0; f < cols_; ++f) {
            if (is_pivot[f]) continue;
            k.at(f, out) = Scalar(1);
            for (int pr = 0; pr < static_cast<int>(pivots.size()); ++pr)
                k.at(pivots[pr], out) = -m.at(pr, f);
            for (int i = 0; i < cols_; ++i) {
                if (k.at(i, out).is_zero()) continue;
                const Scalar inv = k.at(i, out).inverse();
                for (int i2 = i; i2 < cols_; ++i2) k.at(i2, out) *= inv;
                break;
            }
            ++out;
        }
        return k;
    }

    Scalar determinant() const {
        if (rows_ != cols_) throw std::invalid_argument("ScalarMatrix: determinant of non-square matrix");
        ScalarMatrix m = *this;
        Scalar det(1);
        for (int col = 0; col < cols_; ++col) {
            int p = -1;
            for (int i = col; i < rows_; ++i)
                if (!m.at(i, col).is_zero()) { p = i; break; }
            if (p < 0) return Scalar(0);
            if (p != col) {
                for (int j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(col, j));
                det = -det;
            }
            det *= m.at(col, col);
            const Scalar inv = m.at(col, col).inverse();
            for (int i = col + 1; i < rows_; ++i) {
                if (m.at(i, col).is_zero()) continue;
                const Scalar f = m.at(i, col) * inv;
                for (int j = col; j < cols_; ++j) m.at(i, j) -= f * m.at(col, j);
            }
        }
        return det;
    }

    ScalarMatrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("ScalarMatrix: inverse of non-square matrix");
        ScalarMatrix aug(rows_, 2 * cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = Scalar(1);
        }
        auto [m, pivots] = aug.rref();
        if (static_cast<int>(pivots.size()) != rows_ || pivots.back() >= cols_)
            throw std::invalid_argument("ScalarMatrix: singular matrix has no inverse");
        ScalarMatrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = m.at(i, cols_ + j);
        return r;
    }

    /// Canonical basis of the column span: reduced column echelon form
    /// with zero columns dropped. Two matrices have equal column spans
    /// iff their canonical forms are equal.
    ScalarMatrix column_span_canonical() const {
        auto [m, pivots] = transpose().rref();
        const int rk = static_cast<int>(pivots.size());
        ScalarMatrix r(rows_, rk);
        for (int i = 0; i < rk; ++i)
            for (int j = 0; j < rows_; ++j) r.at(j, i) = m.at(i, j);
        return r;
    }

    ScalarMatrix column(int j) const {
        ScalarMatrix c(rows_, 1);
        for (int i = 0; i < rows_; ++i) c.at(i, 0) = at(i, j);
        return c;
    }

    /// Horizontal concatenation [this | other].
    ScalarMatrix hcat(const ScalarMatrix& o) const {
        if (rows_ != o.rows_) throw std::invalid_argument("ScalarMatrix: hcat row mismatch");
        ScalarMatrix r(rows_, cols_ + o.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
            for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
        }
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const ScalarMatrix& m) {
        for (int i = 0; i < m.rows_; ++i) {
            os << (i == 0 ? "[" : " ");
            for (int j = 0; j < m.cols_; ++j) os << (j ? " " : "[") << m.at(i, j);
            os << "]" << (i + 1 == m.rows_ ? "]" : "\n");
        }
        return os;
    }

private:
    static int check(int n) {
        if (n < 0) throw std::invalid_argument("ScalarMatrix: negative dimension");
        return n;
    }
    size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("ScalarMatrix: index out of range");
        return static_cast<size_t>(i) * cols_ + j;
    }

    int rows_, cols_;
    std::vector<Scalar> e_;
};

}  // namespace sympquot
