#pragma once

#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympquot/jet.hpp"
#include "sympquot/scalar_matrix.hpp"

namespace sympquot {

/// Dense matrix over the truncated power-series ring. All entries share
/// one truncation order.
class JetMatrix {
public:
    JetMatrix(int rows, int cols, int order)
        : rows_(rows), cols_(cols), order_(order),
          e_(static_cast<size_t>(rows * cols), Jet(order)) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("JetMatrix: empty shape");
    }

    static JetMatrix identity(int n, int order) {
        JetMatrix m(n, n, order);
        for (int i = 0; i < n; ++i) m.at(i, i) = Jet::constant(order, Scalar(1));
        return m;
    }

    /// Embeds a rational matrix as degree-0 jets.
    static JetMatrix from_scalar(const ScalarMatrix& s, int order) {
        JetMatrix m(s.rows(), s.cols(), order);
        for (int i = 0; i < s.rows(); ++i)
            for (int j = 0; j < s.cols(); ++j)
                m.at(i, j) = Jet::constant(order, s.at(i, j));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int order() const { return order_; }

    const Jet& at(int i, int j) const { return e_[index(i, j)]; }
    Jet& at(int i, int j) { return e_[index(i, j)]; }

    friend bool operator==(const JetMatrix& a, const JetMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.order_ == b.order_ && a.e_ == b.e_;
    }
    friend bool operator!=(const JetMatrix& a, const JetMatrix& b) { return !(a == b); }

    friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("JetMatrix: shape mismatch in product");
        if (a.order_ != b.order_) throw std::invalid_argument("JetMatrix: mismatched truncation orders");
        JetMatrix r(a.rows_, b.cols_, a.order_);
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

    /// Left action by a rational matrix.
    friend JetMatrix operator*(const ScalarMatrix& a, const JetMatrix& b) {
        if (a.cols() != b.rows_) throw std::invalid_argument("JetMatrix: shape mismatch in product");
        JetMatrix r(a.rows(), b.cols_, b.order_);
        for (int i = 0; i < a.rows(); ++i)
            for (int k = 0; k < a.cols(); ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j)
                    r.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return r;
    }

    friend JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("JetMatrix: shape mismatch in sum");
        JetMatrix r(a.rows_, a.cols_, a.order_);
        for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
        return r;
    }

    JetMatrix transpose() const {
        JetMatrix r(cols_, rows_, order_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    /// Matrix of constant terms (evaluation at t = 0).
    ScalarMatrix constant_term() const {
        ScalarMatrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).coeff(0);
        return r;
    }

    /// Smallest valuation over all entries (order() when the matrix is zero).
    int min_entry_valuation() const {
        int v = order_;
        for (const auto& j : e_) v = std::min(v, j.valuation());
        return v;
    }

    /// Entrywise exact division by t^a; requires every entry to have
    /// valuation >= a.
    JetMatrix shifted_down(int a) const {
        JetMatrix r(rows_, cols_, order_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].shifted_down(a);
        return r;
    }

    JetMatrix with_order(int new_order) const {
        JetMatrix r(rows_, cols_, new_order);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].with_order(new_order);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const JetMatrix& m) {
        for (int i = 0; i < m.rows_; ++i) {
            for (int j = 0; j < m.cols_; ++j) os << (j ? " | " : "[") << m.at(i, j);
            os << "]\n";
        }
        return os;
    }

private:
    size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("JetMatrix: index out of range");
        return static_cast<size_t>(i) * cols_ + j;
    }

    int rows_, cols_, order_;
    std::vector<Jet> e_;
};

/// Outcome of the column-echelon reduction of a square jet matrix.
/// `pivot_valuations[i]` is the exponent a_i of the diagonal pivot t^{a_i}
/// in row i; `full_rank` is false when the determinant vanishes to order
/// >= K (rank-deficient within the model).
struct HermiteDecomposition {
    JetMatrix form;
    std::vector<int> pivot_valuations;
    bool full_rank = false;
};

/// Column Hermite normal form over the local ring: unimodular column
/// operations bring the matrix to lower-triangular shape with diagonal
/// pivots exactly t^{a_i}, zero entries above each pivot, and entries left
/// of a pivot reduced modulo t^{a_i} (degree < a_i in row i). This form is
/// the unique such basis of the column span, so equal spans compare equal.
///
/// Pivot selection is per row, ascending: the minimal-valuation entry of
/// row i among the not-yet-used columns, ties broken by lowest column
/// index. (A global minimal-valuation pivot would produce Smith-type
/// pivot exponents, which are not the Hermite diagonal in general.)
inline HermiteDecomposition hermite_decompose(JetMatrix m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermite_decompose: square matrix required");
    const int n = m.rows();
    const int k = m.order();
    HermiteDecomposition out{m, {}, true};
    JetMatrix& h = out.form;
    auto swap_cols = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < n; ++i) std::swap(h.at(i, a), h.at(i, b));
    };
    auto scale_col = [&](int j, const Jet& f) {
        for (int i = 0; i < n; ++i) h.at(i, j) = f * h.at(i, j);
    };
    auto axpy_col = [&](int dst, const Jet& f, int src) {
        // col_dst -= f * col_src
        for (int i = 0; i < n; ++i) h.at(i, dst) -= f * h.at(i, src);
    };

    int total = 0;
    for (int i = 0; i < n; ++i) {
        int best = -1, best_val = k;
        for (int j = i; j < n; ++j) {
            const int v = h.at(i, j).valuation();
            if (v < best_val) { best_val = v; best = j; }
        }
        if (best < 0) {
            out.full_rank = false;
            return out;
        }
        swap_cols(i, best);
        const int a = best_val;
        out.pivot_valuations.push_back(a);
        total += a;
        scale_col(i, h.at(i, i).shifted_down(a).unit_inverse());
        h.at(i, i) = Jet::monomial(k, a);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Jet& entry = h.at(i, j);
            if (entry.is_zero()) continue;
            if (j > i) {
                axpy_col(j, entry.shifted_down(a), i);
            } else {
                const Jet q = (entry - entry.low_part(a)).shifted_down(a);
                if (!q.is_zero()) axpy_col(j, q, i);
            }
        }
    }
    if (total >= k) out.full_rank = false;
    return out;
}

/// Canonical column form of a full-rank square jet matrix; throws when the
/// determinant valuation reaches the truncation order.
inline JetMatrix hermite_form(const JetMatrix& m) {
    auto d = hermite_decompose(m);
    if (!d.full_rank)
        throw std::invalid_argument("hermite_form: rank-deficient matrix (det valuation >= K)");
    return d.form;
}

/// Valuation of det(m) within the model; returns order() (a distinguished
/// "at least K" outcome) when the determinant vanishes to that order.
inline int det_valuation(const JetMatrix& m) {
    auto d = hermite_decompose(m);
    if (!d.full_rank) return m.order();
    int total = 0;
    for (int a : d.pivot_valuations) total += a;
    return total;
}

}  // namespace sympquot
