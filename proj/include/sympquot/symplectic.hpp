#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympquot/rng.hpp"
#include "sympquot/scalar_matrix.hpp"

namespace sympquot {

/// The 2r-dimensional symplectic vector space with the standard form
/// J(i, i+r) = 1, J(i+r, i) = -1 (0-based blocks [[0, I],[-I, 0]]).
struct SymplecticSpace {
    int r = 0;
    ScalarMatrix form;

    SymplecticSpace(int rank, ScalarMatrix j) : r(rank), form(std::move(j)) {}
};

inline SymplecticSpace standard_form(int r) {
    if (r < 1) throw std::invalid_argument("standard_form: r must be positive");
    ScalarMatrix j(2 * r, 2 * r);
    for (int i = 0; i < r; ++i) {
        j.at(i, i + r) = Scalar(1);
        j.at(i + r, i) = Scalar(-1);
    }
    return {r, std::move(j)};
}

/// omega(u, v) = u^T J v on column vectors.
inline Scalar symplectic_pairing(const SymplecticSpace& space, const ScalarMatrix& u,
                                 const ScalarMatrix& v) {
    return (u.transpose() * space.form * v).at(0, 0);
}

inline bool is_lagrangian(const ScalarMatrix& basis, const SymplecticSpace& space) {
    if (basis.rows() != 2 * space.r || basis.cols() != space.r) return false;
    if (basis.rank() != space.r) return false;
    return (basis.transpose() * space.form * basis).is_zero();
}

/// A point of the Lagrangian Grassmannian: a full-rank isotropic frame.
/// Frames are compared by column span, never entrywise.
class LagrangianSubspace {
public:
    LagrangianSubspace(const SymplecticSpace& space, ScalarMatrix basis)
        : r_(space.r), basis_(std::move(basis)) {
        if (!is_lagrangian(basis_, space))
            throw std::invalid_argument("LagrangianSubspace: basis is not a Lagrangian frame");
    }

    int r() const { return r_; }
    const ScalarMatrix& basis() const { return basis_; }
    ScalarMatrix canonical_basis() const { return basis_.column_span_canonical(); }

    bool same_span(const LagrangianSubspace& o) const {
        return canonical_basis() == o.canonical_basis();
    }

private:
    int r_;
    ScalarMatrix basis_;
};

/// Element of Sp(2r): m^T J m = J exactly.
class SymplecticMatrix {
public:
    SymplecticMatrix(const SymplecticSpace& space, ScalarMatrix m)
        : r_(space.r), m_(std::move(m)) {
        if (m_.rows() != 2 * r_ || m_.cols() != 2 * r_ ||
            m_.transpose() * space.form * m_ != space.form)
            throw std::invalid_argument("SymplecticMatrix: m^T J m != J");
    }

    int r() const { return r_; }
    const ScalarMatrix& matrix() const { return m_; }

    bool is_central() const {
        return m_ == ScalarMatrix::identity(2 * r_) || m_ == -ScalarMatrix::identity(2 * r_);
    }

    /// m^{-1} = J^{-1} m^T J = -J m^T J; exact, no elimination involved.
    SymplecticMatrix inverse(const SymplecticSpace& space) const {
        return {space, -(space.form * m_.transpose() * space.form)};
    }

private:
    int r_;
    ScalarMatrix m_;
};

namespace detail {

inline ScalarMatrix random_integer_matrix(int rows, int cols, Rng& rng, long bound = 10) {
    ScalarMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar(rng.uniform(-bound, bound));
    return m;
}

inline ScalarMatrix random_symmetric_matrix(int n, Rng& rng, long bound = 10) {
    ScalarMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m.at(i, j) = Scalar(rng.uniform(-bound, bound));
            m.at(j, i) = m.at(i, j);
        }
    return m;
}

inline ScalarMatrix random_invertible_matrix(int n, Rng& rng, long bound = 10) {
    for (;;) {
        ScalarMatrix m = random_integer_matrix(n, n, rng, bound);
        if (m.rank() == n) return m;
    }
}

}  // namespace detail

/// Deterministic sample from the full symplectic group: a short word in
/// the generators diag(A, (A^T)^{-1}), the two symmetric shears, and J.
inline SymplecticMatrix random_symplectic(const SymplecticSpace& space, Rng& rng) {
    const int r = space.r;
    ScalarMatrix m = ScalarMatrix::identity(2 * r);
    const int length = static_cast<int>(rng.uniform(3, 6));
    for (int w = 0; w < length; ++w) {
        ScalarMatrix g(2 * r, 2 * r);
        switch (rng.uniform(0, 3)) {
            case 0: {  // [[A, 0], [0, (A^T)^{-1}]]
                ScalarMatrix a = detail::random_invertible_matrix(r, rng, 3);
                ScalarMatrix ainvt = a.inverse().transpose();
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) {
                        g.at(i, j) = a.at(i, j);
                        g.at(i + r, j + r) = ainvt.at(i, j);
                    }
                break;
            }
            case 1: {  // [[I, S], [0, I]]
                ScalarMatrix s = detail::random_symmetric_matrix(r, rng, 3);
                g = ScalarMatrix::identity(2 * r);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) g.at(i, j + r) = s.at(i, j);
                break;
            }
            case 2: {  // [[I, 0], [S, I]]
                ScalarMatrix s = detail::random_symmetric_matrix(r, rng, 3);
                g = ScalarMatrix::identity(2 * r);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) g.at(i + r, j) = s.at(i, j);
                break;
            }
            default:
                g = space.form;
        }
        m = m * g;
    }
    return {space, std::move(m)};
}

inline SymplecticMatrix random_symplectic(const SymplecticSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    return random_symplectic(space, rng);
}

/// Graph-chart sample moved by a random symplectic element, so every
/// chart of the Grassmannian is reachable.
inline LagrangianSubspace random_lagrangian(const SymplecticSpace& space, Rng& rng) {
    const int r = space.r;
    ScalarMatrix s = detail::random_symmetric_matrix(r, rng);
    ScalarMatrix graph(2 * r, r);
    for (int i = 0; i < r; ++i) {
        graph.at(i, i) = Scalar(1);
        for (int j = 0; j < r; ++j) graph.at(i + r, j) = s.at(i, j);
    }
    SymplecticMatrix move = random_symplectic(space, rng);
    return {space, move.matrix() * graph};
}

inline LagrangianSubspace random_lagrangian(const SymplecticSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    return random_lagrangian(space, rng);
}

inline LagrangianSubspace act_on_lagrangian(const SymplecticMatrix& m,
                                            const LagrangianSubspace& v,
                                            const SymplecticSpace& space) {
    if (m.r() != v.r()) throw std::invalid_argument("act_on_lagrangian: rank mismatch");
    return {space, m.matrix() * v.basis()};
}

/// Dimension of the symmetric-matrix graph chart S |-> span[I; S]. The
/// parameter count r(r+1)/2 is cross-checked by the rank of the chart
/// differential at a random point, computed through generic quotient
/// coordinates rather than the closed-form identification.
inline int lagrangian_chart_dimension(const SymplecticSpace& space) {
    const int r = space.r;
    const int expected = r * (r + 1) / 2;

    Rng rng(0x5ca1ab1e ^ static_cast<std::uint64_t>(r));
    ScalarMatrix s0 = detail::random_symmetric_matrix(r, rng);
    ScalarMatrix v(2 * r, r);
    for (int i = 0; i < r; ++i) {
        v.at(i, i) = Scalar(1);
        for (int j = 0; j < r; ++j) v.at(i + r, j) = s0.at(i, j);
    }

    // Complete v to a basis of the ambient space by greedy standard vectors.
    ScalarMatrix frame = v;
    std::vector<int> completion;
    for (int e = 0; e < 2 * r && static_cast<int>(completion.size()) < r; ++e) {
        ScalarMatrix cand(2 * r, 1);
        cand.at(e, 0) = Scalar(1);
        ScalarMatrix test = frame.hcat(cand);
        if (test.rank() == test.cols()) {
            frame = std::move(test);
            completion.push_back(e);
        }
    }
    ScalarMatrix frame_inv = frame.inverse();

    // Tangent vectors of the chart land in Hom(V, ambient/V); a chart
    // direction T sends column v_j to the class of (0; T e_j). Stack the
    // quotient coordinates of all r columns for each symmetric basis
    // direction and measure the rank.
    std::vector<ScalarMatrix> sym_basis;
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
            ScalarMatrix t(r, r);
            t.at(i, j) = Scalar(1);
            t.at(j, i) = Scalar(1);
            sym_basis.push_back(std::move(t));
        }

    ScalarMatrix differential(r * r, static_cast<int>(sym_basis.size()));
    for (int b = 0; b < static_cast<int>(sym_basis.size()); ++b) {
        for (int col = 0; col < r; ++col) {
            ScalarMatrix dir(2 * r, 1);
            for (int i = 0; i < r; ++i) dir.at(i + r, 0) = sym_basis[b].at(i, col);
            ScalarMatrix coords = frame_inv * dir;  // first r: along V, last r: quotient
            for (int q = 0; q < r; ++q) differential.at(col * r + q, b) = coords.at(r + q, 0);
        }
    }
    const int observed = differential.rank();
    if (observed != expected)
        throw std::logic_error("lagrangian_chart_dimension: chart differential rank disagrees with parameter count");
    return expected;
}

/// Searches `trials` sampled Lagrangians for one moved by m. Central
/// elements are handled exactly: the answer is always absent for +-I.
inline std::optional<LagrangianSubspace> effectiveness_witness(const SymplecticMatrix& m,
                                                               const SymplecticSpace& space,
                                                               int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("effectiveness_witness: trials must be >= 1");
    if (m.is_central()) return std::nullopt;
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        LagrangianSubspace v = random_lagrangian(space, rng);
        if (!act_on_lagrangian(m, v, space).same_span(v)) return v;
    }
    return std::nullopt;
}

}  // namespace sympquot
