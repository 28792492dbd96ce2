#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sympquot/local_model.hpp"

namespace sympquot {

/// Linear realization of the tangent space cut inside the ambient
/// hom-space. Columns index the images of the 2r local generators in a
/// fixed monomial basis of each finite quotient module; rows are the
/// symmetrized-pairing equations with the divisor-deformation directions
/// already eliminated, so the kernel is exactly the tangent space of the
/// symplectic locus.
struct TangentSystem {
    QuotPoint base;
    int ambient_dimension = 0;
    ScalarMatrix constraint_matrix{0, 0};
};

namespace detail {

/// Monomial basis of the quotient module R^{2r} / col-span(A): residues
/// of t^l e_i with l below the Hermite pivot exponent of row i.
struct QuotientBasis {
    JetMatrix hermite;
    std::vector<int> pivot_vals;
    std::vector<std::pair<int, int>> monomials;  // (coordinate, level), deterministic order

    int colength() const { return static_cast<int>(monomials.size()); }
};

inline QuotientBasis quotient_basis(const JetMatrix& presentation) {
    auto dec = hermite_decompose(presentation);
    if (!dec.full_rank)
        throw std::invalid_argument("quotient_basis: rank-deficient local model");
    QuotientBasis qb{std::move(dec.form), std::move(dec.pivot_valuations), {}};
    for (int i = 0; i < qb.hermite.rows(); ++i)
        for (int l = 0; l < qb.pivot_vals[i]; ++l) qb.monomials.emplace_back(i, l);
    return qb;
}

/// Canonical representative of a vector modulo the column span: reduce
/// coordinates top-down against the Hermite pivots, leaving coordinate i
/// of degree < a_i.
inline std::vector<Jet> reduce_against(const QuotientBasis& qb, std::vector<Jet> vec) {
    const int n = qb.hermite.rows();
    for (int i = 0; i < n; ++i) {
        const int a = qb.pivot_vals[i];
        const Jet head = vec[i] - vec[i].low_part(a);
        if (head.is_zero()) continue;
        const Jet q = head.shifted_down(a);
        for (int s = i; s < n; ++s) vec[s] -= q * qb.hermite.at(s, i);
    }
    return vec;
}

/// Per-point equations. `lift_variant` selects the lift convention for
/// the monomial basis classes: 0 is the canonical representative itself,
/// 1 perturbs each lift by an element of the local span (used to verify
/// lift-independence of the system).
struct PointSystem {
    int columns = 0;        // 2r * colength
    int multiplicity = 0;   // m_p
    int colength = 0;
    ScalarMatrix equations{0, 0};   // raw symmetrized-pairing rows
    ScalarMatrix divisor_dirs{0, 0};  // same rows, sigma columns
    ScalarMatrix constraint{0, 0};  // equations with sigma eliminated
};

inline PointSystem point_system(const QuotPoint& q, const LocalModel& model,
                                int lift_variant = 0) {
    const int two_r = 2 * q.r();
    const int order = q.truncation();
    const QuotientBasis qb = quotient_basis(model.presentation);
    const int c = qb.colength();

    const JetMatrix gram = local_gram(q, model);
    const int mult = gram.min_entry_valuation();

    PointSystem ps;
    ps.columns = two_r * c;
    ps.multiplicity = mult >= order ? 0 : mult;
    ps.colength = c;

    const int pairs = two_r * (two_r - 1) / 2;
    const int rows = pairs * ps.multiplicity;
    ScalarMatrix m(rows, ps.columns);
    ScalarMatrix b(rows, ps.multiplicity);
    if (rows == 0 || ps.columns == 0) {
        ps.equations = ScalarMatrix(rows, ps.columns);
        ps.divisor_dirs = std::move(b);
        ps.constraint = ScalarMatrix(0, ps.columns);
        return ps;
    }

    // Lift of each monomial class; variant 1 adds a deterministic element
    // of the span, which must not change any equation below level m_p.
    std::vector<std::vector<Jet>> lifts;
    lifts.reserve(c);
    for (int bidx = 0; bidx < c; ++bidx) {
        const auto [coord, level] = qb.monomials[bidx];
        std::vector<Jet> lift(two_r, Jet(order));
        lift[coord] = Jet::monomial(order, level);
        if (lift_variant == 1) {
            const int gen = bidx % two_r;
            for (int s = 0; s < two_r; ++s)
                lift[s] += Scalar(1 + bidx % 3) * model.presentation.at(s, gen);
        }
        lifts.push_back(std::move(lift));
    }

    // pairing_with_gen[i][b] = omega(v_i, lift_b) as a jet.
    const SymplecticSpace space = standard_form(q.r());
    const JetMatrix j_cols = space.form * model.presentation;  // column i = J v_i
    std::vector<std::vector<Jet>> pairing(two_r, std::vector<Jet>(c, Jet(order)));
    for (int i = 0; i < two_r; ++i)
        for (int bidx = 0; bidx < c; ++bidx) {
            Jet acc(order);
            for (int s = 0; s < two_r; ++s) {
                // omega(v_i, w) = -omega(w, v_i) = (v_i^T J) w = -(J v_i)^T w
                acc -= j_cols.at(s, i) * lifts[bidx][s];
            }
            pairing[i][bidx] = std::move(acc);
        }

    const JetMatrix unit_pairing = gram.shifted_down(ps.multiplicity);

    int row = 0;
    for (int i = 0; i < two_r; ++i)
        for (int jg = i + 1; jg < two_r; ++jg)
            for (int level = 0; level < ps.multiplicity; ++level, ++row) {
                for (int bidx = 0; bidx < c; ++bidx) {
                    m.at(row, jg * c + bidx) += pairing[i][bidx].coeff(level);
                    m.at(row, i * c + bidx) -= pairing[jg][bidx].coeff(level);
                }
                for (int u = 0; u <= level; ++u)
                    b.at(row, u) = unit_pairing.at(i, jg).coeff(level - u);
            }

    // alpha is tangent iff the symmetrized pairing equals sigma * (unit
    // pairing) for some sigma in O/t^m: eliminate sigma by projecting the
    // equations onto the complement of the divisor-deformation columns.
    const ScalarMatrix left_null = b.transpose().kernel_basis();  // rows x k
    ps.constraint = left_null.transpose() * m;
    ps.equations = std::move(m);
    ps.divisor_dirs = std::move(b);
    return ps;
}

}  // namespace detail

/// Coordinate dimension of the direct sum over support points of
/// Hom(F_p, (E_0/F)_p); equals 2 r^2 d for members of the ambient scheme.
inline int hom_space_dimension(const QuotPoint& q) {
    if (!is_in_tilde_q(q))
        throw std::invalid_argument("hom_space_dimension: point is not in the ambient Quot scheme");
    int total = 0;
    for (const auto& m : q.models())
        total += 2 * q.r() * detail::quotient_basis(m.presentation).colength();
    return total;
}

inline TangentSystem build_tangent_system(const QuotPoint& q, int lift_variant = 0) {
    if (!is_in_q(q))
        throw std::invalid_argument("build_tangent_system: point is not in the symplectic Quot scheme");
    std::vector<detail::PointSystem> blocks;
    int ambient = 0, rows = 0;
    for (const auto& m : q.models()) {
        blocks.push_back(detail::point_system(q, m, lift_variant));
        ambient += blocks.back().columns;
        rows += blocks.back().constraint.rows();
    }
    ScalarMatrix constraint(rows, ambient);
    int row0 = 0, col0 = 0;
    for (const auto& blk : blocks) {
        for (int i = 0; i < blk.constraint.rows(); ++i)
            for (int j = 0; j < blk.constraint.cols(); ++j)
                constraint.at(row0 + i, col0 + j) = blk.constraint.at(i, j);
        row0 += blk.constraint.rows();
        col0 += blk.constraint.cols();
    }
    return {q, ambient, std::move(constraint)};
}

/// Kernel dimension of the constraint system. Over a reduced divisor this
/// equals d (r^2 + r + 2) / 2; over non-reduced divisors the value is
/// reported as observed data.
inline int symplectic_tangent_dimension(const QuotPoint& q) {
    const TangentSystem sys = build_tangent_system(q);
    return sys.ambient_dimension - sys.constraint_matrix.rank();
}

// ---------------------------------------------------------------------------
// Dimension verification harness.

struct DimensionReportRow {
    int r = 0, d = 0;
    std::uint64_t sample_seed = 0;
    std::string divisor_type;  // "reduced" | "non-reduced"
    int hom_dim = 0;
    int hom_expected = 0;
    int tangent_dim = 0;
    std::optional<int> tangent_expected;  // absent over non-reduced divisors
    bool match = false;
};

struct DimensionReport {
    int r_max = 0, d_max = 0, samples = 0;
    std::uint64_t seed = 0;
    std::vector<DimensionReportRow> rows;

    bool all_match() const {
        for (const auto& row : rows)
            if (!row.match) return false;
        return true;
    }
};

/// Sweeps the (r, d) grid with seeded samples of the symplectic locus,
/// comparing both computed dimensions with their closed forms. Reduced
/// and non-reduced divisors alternate; only reduced rows carry a tangent
/// expectation.
inline DimensionReport dimension_report(int r_max, int d_max, int samples,
                                        std::uint64_t seed) {
    if (r_max < 1 || d_max < 1 || samples < 1)
        throw std::invalid_argument("dimension_report: grid bounds and sample count must be >= 1");
    DimensionReport report{r_max, d_max, samples, seed, {}};
    for (int r = 1; r <= r_max; ++r)
        for (int d = 1; d <= d_max; ++d)
            for (int s = 0; s < samples; ++s) {
                const std::uint64_t cell_seed = Rng::derive(
                    seed, (static_cast<std::uint64_t>(r) * 64 + d) * 1024 + s);
                Rng rng(cell_seed);
                const QuotPoint q = (s % 2 == 1)
                                        ? random_q_member(r, d, rng, true)
                                        : random_q_member_reduced(r, d, rng);
                DimensionReportRow row;
                row.r = r;
                row.d = d;
                row.sample_seed = cell_seed;
                const DivisorMultiset div = divisor_map(q);
                const bool reduced = div.reduced() && div.degree() == d;
                row.divisor_type = reduced ? "reduced" : "non-reduced";
                row.hom_dim = hom_space_dimension(q);
                row.hom_expected = 2 * r * r * d;
                row.tangent_dim = symplectic_tangent_dimension(q);
                if (reduced) row.tangent_expected = d * (r * r + r + 2) / 2;
                row.match = row.hom_dim == row.hom_expected &&
                            (!row.tangent_expected || row.tangent_dim == *row.tangent_expected);
                report.rows.push_back(std::move(row));
            }
    return report;
}

}  // namespace sympquot
