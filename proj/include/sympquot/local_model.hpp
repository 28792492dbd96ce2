#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympquot/jet_matrix.hpp"
#include "sympquot/symplectic.hpp"

namespace sympquot {

/// A point of the affine coordinate chart of the curve; the local
/// coordinate at p is t = x - p. Only the local rings at support points
/// enter any computation, so this is all the curve geometry needed.
struct SupportPoint {
    Scalar coordinate;

    friend bool operator==(const SupportPoint& a, const SupportPoint& b) {
        return a.coordinate == b.coordinate;
    }
    friend bool operator!=(const SupportPoint& a, const SupportPoint& b) { return !(a == b); }
    friend bool operator<(const SupportPoint& a, const SupportPoint& b) {
        return a.coordinate < b.coordinate;
    }
};

/// Local presentation of a full-rank subsheaf of the trivial rank-2r
/// bundle near one support point: the column span of a square jet matrix.
/// The determinant valuation is the local colength of the quotient.
struct LocalModel {
    SupportPoint point;
    JetMatrix presentation;
};

/// Effective divisor on the chart as a point -> multiplicity multiset.
struct DivisorMultiset {
    std::vector<std::pair<SupportPoint, int>> pairs;  // sorted by coordinate

    int degree() const {
        int total = 0;
        for (const auto& [p, m] : pairs) total += m;
        return total;
    }
    bool reduced() const {
        for (const auto& [p, m] : pairs)
            if (m != 1) return false;
        return true;
    }
    friend bool operator==(const DivisorMultiset& a, const DivisorMultiset& b) {
        return a.pairs == b.pairs;
    }
};

/// Candidate point of the Quot scheme: the integers (r, d) plus one local
/// model per support point, all sharing one truncation order K >= 2rd+1.
/// Every valuation any operation inspects is at most 2rd, so the default
/// K = 2rd+1 separates all relevant orders from genuine vanishing;
/// raising K never changes a result.
class QuotPoint {
public:
    static int default_truncation(int r, int d) { return 2 * r * d + 1; }

    QuotPoint(int r, int d, std::vector<LocalModel> models, int truncation = 0)
        : r_(r), d_(d), models_(std::move(models)),
          truncation_(truncation == 0 ? default_truncation(r, d) : truncation) {
        if (r_ < 1 || d_ < 1) throw std::invalid_argument("QuotPoint: r and d must be positive");
        if (truncation_ < default_truncation(r_, d_))
            throw std::invalid_argument("QuotPoint: truncation order below the 2rd+1 safety cap");
        std::sort(models_.begin(), models_.end(),
                  [](const LocalModel& a, const LocalModel& b) { return a.point < b.point; });
        for (size_t i = 0; i + 1 < models_.size(); ++i)
            if (models_[i].point == models_[i + 1].point)
                throw std::invalid_argument("QuotPoint: repeated support points");
        for (const auto& m : models_) {
            if (m.presentation.rows() != 2 * r_ || m.presentation.cols() != 2 * r_)
                throw std::invalid_argument("QuotPoint: local matrix is not 2r x 2r");
            if (m.presentation.order() != truncation_)
                throw std::invalid_argument("QuotPoint: non-uniform truncation order");
        }
    }

    int r() const { return r_; }
    int d() const { return d_; }
    int truncation() const { return truncation_; }
    const std::vector<LocalModel>& models() const { return models_; }

    /// The same point re-expressed at a higher truncation order.
    QuotPoint with_truncation(int new_order) const {
        std::vector<LocalModel> ms;
        ms.reserve(models_.size());
        for (const auto& m : models_)
            ms.push_back({m.point, m.presentation.with_order(new_order)});
        return {r_, d_, std::move(ms), new_order};
    }

private:
    int r_, d_;
    std::vector<LocalModel> models_;
    int truncation_;
};

/// Gram matrix A^T J A of the restricted symplectic form on the local
/// column span, in the presentation's generators.
inline JetMatrix local_gram(const QuotPoint& q, const LocalModel& model) {
    const SymplecticSpace space = standard_form(q.r());
    return model.presentation.transpose() * (space.form * model.presentation);
}

/// Order of vanishing of the restricted form at this point: the minimal
/// entrywise valuation of the Gram matrix (capped at K).
inline int local_multiplicity(const QuotPoint& q, const LocalModel& model) {
    return local_gram(q, model).min_entry_valuation();
}

inline int total_colength(const QuotPoint& q) {
    int total = 0;
    for (const auto& m : q.models()) total += det_valuation(m.presentation);
    return total;
}

inline bool is_in_tilde_q(const QuotPoint& q) {
    int total = 0;
    for (const auto& m : q.models()) {
        const int v = det_valuation(m.presentation);
        if (v >= m.presentation.order()) return false;  // rank-deficient in the model
        total += v;
    }
    return total == q.r() * q.d();
}

/// Local orders a_p <= m_p summing to exactly d exist iff sum m_p >= d,
/// which is the factoring condition through O(-D) for an effective D of
/// degree d.
inline bool is_in_q(const QuotPoint& q) {
    if (!is_in_tilde_q(q)) return false;
    int total = 0;
    for (const auto& m : q.models()) total += local_multiplicity(q, m);
    return total >= q.d();
}

inline DivisorMultiset divisor_map(const QuotPoint& q) {
    if (!is_in_tilde_q(q))
        throw std::invalid_argument("divisor_map: point is not in the ambient Quot scheme");
    DivisorMultiset div;
    for (const auto& m : q.models()) {
        const int mult = local_multiplicity(q, m);
        if (mult >= 1) div.pairs.emplace_back(m.point, mult);
    }
    return div;
}

/// For members the pairing (A^T J A)/t^{m_p} must be a unit matrix over
/// the local ring at every support point; checked, never assumed.
inline bool perfect_pairing_check(const QuotPoint& q) {
    if (!is_in_q(q))
        throw std::invalid_argument("perfect_pairing_check: point is not in the symplectic Quot scheme");
    for (const auto& m : q.models()) {
        const JetMatrix gram = local_gram(q, m);
        const int mult = gram.min_entry_valuation();
        if (mult >= gram.order()) return false;
        if (gram.shifted_down(mult).constant_term().rank() != 2 * q.r()) return false;
    }
    return true;
}

inline QuotPoint apply_group(const SymplecticMatrix& m, const QuotPoint& q) {
    if (m.r() != q.r()) throw std::invalid_argument("apply_group: rank mismatch");
    std::vector<LocalModel> models;
    models.reserve(q.models().size());
    for (const auto& lm : q.models())
        models.push_back({lm.point, m.matrix() * lm.presentation});
    return {q.r(), q.d(), std::move(models), q.truncation()};
}

/// Pointwise canonical column form; two presentations of the same
/// subsheaf compare equal after this.
inline QuotPoint canonical_form(const QuotPoint& q) {
    std::vector<LocalModel> models;
    models.reserve(q.models().size());
    for (const auto& lm : q.models()) models.push_back({lm.point, hermite_form(lm.presentation)});
    return {q.r(), q.d(), std::move(models), q.truncation()};
}

inline bool same_quot_point(const QuotPoint& a, const QuotPoint& b) {
    if (a.r() != b.r() || a.d() != b.d() || a.truncation() != b.truncation()) return false;
    if (a.models().size() != b.models().size()) return false;
    const QuotPoint ca = canonical_form(a), cb = canonical_form(b);
    for (size_t i = 0; i < ca.models().size(); ++i) {
        if (ca.models()[i].point != cb.models()[i].point) return false;
        if (ca.models()[i].presentation != cb.models()[i].presentation) return false;
    }
    return true;
}

/// Greedy completion of a full-column-rank frame to a basis of the
/// ambient space by standard basis vectors; deterministic.
inline ScalarMatrix standard_completion(const ScalarMatrix& basis) {
    const int n = basis.rows();
    ScalarMatrix frame = basis;
    ScalarMatrix completion(n, n - basis.cols());
    int found = 0;
    for (int e = 0; e < n && found < completion.cols(); ++e) {
        ScalarMatrix cand(n, 1);
        cand.at(e, 0) = Scalar(1);
        ScalarMatrix test = frame.hcat(cand);
        if (test.rank() == test.cols()) {
            frame = std::move(test);
            completion.at(e, found) = Scalar(1);
            ++found;
        }
    }
    if (found != completion.cols())
        throw std::invalid_argument("standard_completion: input frame is rank-deficient");
    return completion;
}

/// Local model [B | t^k C] of the subsheaf of sections whose k-jet at the
/// point lies in the span of B: column span B + t^k * (everything else).
/// No Lagrangian condition is imposed; membership in the symplectic locus
/// is whatever it is.
inline JetMatrix subspace_quotient_model(const ScalarMatrix& basis, int power, int order) {
    const int n = basis.rows();
    const ScalarMatrix completion = standard_completion(basis);
    JetMatrix a(n, n, order);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < basis.cols(); ++j)
            a.at(i, j) = Jet::constant(order, basis.at(i, j));
        for (int j = 0; j < completion.cols(); ++j)
            a.at(i, basis.cols() + j) = Jet::monomial(order, power, completion.at(i, j));
    }
    return a;
}

/// The fiber construction: the quotient of the trivial bundle by the
/// Lagrangian V_i at the point x_i, one reduced divisor point per entry.
inline QuotPoint from_lagrangians(const std::vector<SupportPoint>& points,
                                  const std::vector<LagrangianSubspace>& subspaces) {
    if (points.empty()) throw std::invalid_argument("from_lagrangians: empty point list");
    if (points.size() != subspaces.size())
        throw std::invalid_argument("from_lagrangians: point and subspace counts differ");
    const int r = subspaces.front().r();
    for (const auto& v : subspaces)
        if (v.r() != r) throw std::invalid_argument("from_lagrangians: mixed symplectic spaces");
    const int d = static_cast<int>(points.size());
    const int order = QuotPoint::default_truncation(r, d);
    std::vector<LocalModel> models;
    models.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        models.push_back({points[i], subspace_quotient_model(subspaces[i].basis(), 1, order)});
    return {r, d, std::move(models)};  // the ctor rejects repeated points
}

/// Inverse of the fiber construction over a reduced divisor: evaluate
/// each local presentation at t = 0; the image is a Lagrangian of rank
/// exactly r whenever the point is a member with reduced divisor.
inline std::pair<std::vector<SupportPoint>, std::vector<LagrangianSubspace>>
lagrangians_from_fiber(const QuotPoint& q) {
    if (!is_in_q(q))
        throw std::invalid_argument("lagrangians_from_fiber: point is not in the symplectic Quot scheme");
    const DivisorMultiset div = divisor_map(q);
    if (!div.reduced() || div.degree() != q.d() ||
        div.pairs.size() != q.models().size())
        throw std::invalid_argument("lagrangians_from_fiber: divisor is not reduced");
    const SymplecticSpace space = standard_form(q.r());
    std::vector<SupportPoint> points;
    std::vector<LagrangianSubspace> subspaces;
    for (const auto& m : q.models()) {
        const ScalarMatrix ev = m.presentation.constant_term().column_span_canonical();
        if (ev.cols() != q.r() || !is_lagrangian(ev, space))
            throw std::invalid_argument("lagrangians_from_fiber: evaluation is not a Lagrangian frame");
        points.push_back(m.point);
        subspaces.emplace_back(space, ev);
    }
    return {std::move(points), std::move(subspaces)};
}

// ---------------------------------------------------------------------------
// Seeded samplers shared by the report harness, the CLI and the test suites.

namespace detail {

inline std::vector<SupportPoint> random_support_points(int count, Rng& rng) {
    std::vector<SupportPoint> pts;
    while (static_cast<int>(pts.size()) < count) {
        const long num = rng.uniform(-12, 12);
        const long den = rng.uniform(0, 3) == 0 ? rng.uniform(2, 3) : 1;
        SupportPoint p{Scalar(num, den)};
        bool fresh = true;
        for (const auto& existing : pts)
            if (existing == p) { fresh = false; break; }
        if (fresh) pts.push_back(std::move(p));
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Unit-determinant jet matrix: invertible constant part times (I + t N).
inline JetMatrix random_unit_jet_matrix(int n, int order, Rng& rng) {
    const ScalarMatrix u0 = random_invertible_matrix(n, rng, 3);
    JetMatrix m = JetMatrix::from_scalar(u0, order);
    JetMatrix shear = JetMatrix::identity(n, order);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet e(order);
            if (order > 1) e.set_coeff(1, Scalar(rng.uniform(-2, 2)));
            if (order > 2) e.set_coeff(2, Scalar(rng.uniform(-2, 2)));
            shear.at(i, j) += e;
        }
    return m * shear;
}

/// Composition of `total` into `slots` nonnegative parts, uniform slot drops.
inline std::vector<int> random_composition(int total, int slots, Rng& rng) {
    std::vector<int> parts(slots, 0);
    for (int i = 0; i < total; ++i) parts[rng.uniform(0, slots - 1)]++;
    return parts;
}

}  // namespace detail

/// Random member of the ambient Quot scheme: local models
/// U diag(t^{a_1},...,t^{a_2r}) W with unit-determinant U, W and
/// prescribed total colength rd, spread over a random support set.
inline QuotPoint random_tilde_q_point(int r, int d, Rng& rng, int order = 0) {
    if (order == 0) order = QuotPoint::default_truncation(r, d);
    const int colength = r * d;
    const int n_points = static_cast<int>(rng.uniform(1, std::min(colength, 3)));
    std::vector<int> per_point(n_points, 1);
    for (int extra = colength - n_points; extra > 0; --extra)
        per_point[rng.uniform(0, n_points - 1)]++;
    const auto points = detail::random_support_points(n_points, rng);
    std::vector<LocalModel> models;
    for (int p = 0; p < n_points; ++p) {
        const auto exps = detail::random_composition(per_point[p], 2 * r, rng);
        JetMatrix diag(2 * r, 2 * r, order);
        for (int i = 0; i < 2 * r; ++i) diag.at(i, i) = Jet::monomial(order, exps[i]);
        const JetMatrix u = detail::random_unit_jet_matrix(2 * r, order, rng);
        const JetMatrix w = detail::random_unit_jet_matrix(2 * r, order, rng);
        models.push_back({points[p], u * diag * w});
    }
    return {r, d, std::move(models), order};
}

/// Random member of the symplectic locus. Multiplicity pattern: all ones
/// (reduced divisor) unless `allow_nonreduced`, in which case a random
/// composition of d is used; the local model at a multiplicity-k point is
/// [B | t^k C] for a random Lagrangian frame B. Presentations are
/// scrambled by unit-determinant column moves.
inline QuotPoint random_q_member(int r, int d, Rng& rng, bool allow_nonreduced,
                                 int order = 0) {
    if (order == 0) order = QuotPoint::default_truncation(r, d);
    const SymplecticSpace space = standard_form(r);
    std::vector<int> mults;
    if (allow_nonreduced && d >= 2) {
        int remaining = d;
        while (remaining > 0) {
            const int part = static_cast<int>(rng.uniform(1, std::min(remaining, 3)));
            mults.push_back(part);
            remaining -= part;
        }
    } else {
        mults.assign(d, 1);
    }
    const auto points = detail::random_support_points(static_cast<int>(mults.size()), rng);
    std::vector<LocalModel> models;
    for (size_t i = 0; i < mults.size(); ++i) {
        const LagrangianSubspace v = random_lagrangian(space, rng);
        JetMatrix a = subspace_quotient_model(v.basis(), mults[i], order);
        a = a * detail::random_unit_jet_matrix(2 * r, order, rng);
        models.push_back({points[i], std::move(a)});
    }
    return {r, d, std::move(models), order};
}

inline QuotPoint random_q_member_reduced(int r, int d, Rng& rng, int order = 0) {
    return random_q_member(r, d, rng, false, order);
}

}  // namespace sympquot
