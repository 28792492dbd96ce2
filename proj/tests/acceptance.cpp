// Acceptance suite: one pass/fail line per criterion, exit 0 iff all
// pass. All checks are exact; there are no tolerances anywhere. The CLI
// binary path is expected as argv[1] (used by the determinism criterion).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sympquot/io.hpp"
#include "sympquot/tangent.hpp"

using namespace sympquot;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;
std::vector<QuotPoint> g_members;          // members of the symplectic locus from criteria 2-4
std::vector<QuotPoint> g_reduced_members;  // criterion 3 samples
std::vector<int> g_reduced_tangent_dims;   // their observed tangent dimensions

struct Outcome {
    bool pass = false;
    std::string detail;
};

int run_criterion(int id, const std::string& label, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s — %s (%s; %.2f s)\n", id, outcome.pass ? "PASS" : "FAIL",
                label.c_str(), outcome.detail.c_str(), secs);
    std::fflush(stdout);
    return outcome.pass ? 0 : 1;
}

bool laws_hold(const QuotPoint& q) {
    if (divisor_map(q).degree() != q.d()) return false;  // saturation: sum m_p = d exactly
    for (const auto& model : q.models()) {
        const int mult = local_multiplicity(q, model);
        if (det_valuation(model.presentation) != q.r() * mult) return false;
    }
    return true;
}

Outcome criterion_chart_dimension() {
    const int expected[] = {1, 3, 6, 10};
    for (int r = 1; r <= 4; ++r)
        if (lagrangian_chart_dimension(standard_form(r)) != expected[r - 1])
            return {false, "mismatch at r = " + std::to_string(r)};
    return {true, "r(r+1)/2 = 1, 3, 6, 10 for r = 1..4"};
}

Outcome criterion_hom_dimension() {
    int ok = 0, total = 0;
    for (int r = 1; r <= 3; ++r)
        for (int d = 1; d <= 3; ++d)
            for (int s = 0; s < 10; ++s) {
                Rng rng(Rng::derive(20'000, (r * 16 + d) * 64 + s));
                const QuotPoint q = random_tilde_q_point(r, d, rng);
                ++total;
                if (hom_space_dimension(q) == 2 * r * r * d) ++ok;
                if (is_in_q(q)) g_members.push_back(q);
            }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " equal 2 r^2 d"};
}

Outcome criterion_tangent_dimension() {
    int ok = 0, total = 0;
    for (int r = 1; r <= 3; ++r)
        for (int d = 1; d <= 3; ++d)
            for (int s = 0; s < 10; ++s) {
                Rng rng(Rng::derive(30'000, (r * 16 + d) * 64 + s));
                const QuotPoint q = random_q_member_reduced(r, d, rng);
                const int dim = symplectic_tangent_dimension(q);
                ++total;
                if (dim == d * (r * r + r + 2) / 2) ++ok;
                g_members.push_back(q);
                g_reduced_members.push_back(q);
                g_reduced_tangent_dims.push_back(dim);
            }
    return {ok == total,
            std::to_string(ok) + "/" + std::to_string(total) + " equal d(r^2+r+2)/2"};
}

Outcome criterion_fiber_round_trip() {
    const int r = 2, d = 3;
    const SymplecticSpace space = standard_form(r);
    int ok = 0;
    for (int s = 0; s < 100; ++s) {
        Rng rng(Rng::derive(40'000, s));
        const auto points = detail::random_support_points(d, rng);
        std::vector<LagrangianSubspace> vs;
        for (int i = 0; i < d; ++i) vs.push_back(random_lagrangian(space, rng));
        const QuotPoint q = from_lagrangians(points, vs);
        const auto [rpts, rvs] = lagrangians_from_fiber(q);
        bool good = rpts.size() == static_cast<size_t>(d);
        for (int i = 0; good && i < d; ++i)
            good = rpts[i] == points[i] && rvs[i].same_span(vs[i]);
        good = good && same_quot_point(from_lagrangians(rpts, rvs), q);
        if (good) ++ok;
        g_members.push_back(q);
    }
    return {ok == 100, std::to_string(ok) + "/100 round trips exact at r=2, d=3"};
}

Outcome criterion_effectiveness() {
    int witnessed = 0, total = 0, false_witnesses = 0;
    for (int r = 1; r <= 3; ++r) {
        const SymplecticSpace space = standard_form(r);
        Rng rng(Rng::derive(50'000, r));
        int sampled = 0;
        while (sampled < 100) {
            const SymplecticMatrix m = random_symplectic(space, rng);
            if (m.is_central()) continue;
            ++sampled;
            ++total;
            const auto w = effectiveness_witness(m, space, 50, rng.next_u64());
            if (!w) continue;
            if (act_on_lagrangian(m, *w, space).same_span(*w)) ++false_witnesses;
            else ++witnessed;
        }
        // the center fixes every sampled Lagrangian
        for (const Scalar& sign : {Scalar(1), Scalar(-1)}) {
            ScalarMatrix c(2 * r, 2 * r);
            for (int i = 0; i < 2 * r; ++i) c.at(i, i) = sign;
            const SymplecticMatrix central(space, std::move(c));
            if (effectiveness_witness(central, space, 50, rng.next_u64()).has_value())
                ++false_witnesses;
            for (int t = 0; t < 50; ++t) {
                const LagrangianSubspace v = random_lagrangian(space, rng);
                if (!act_on_lagrangian(central, v, space).same_span(v)) ++false_witnesses;
            }
        }
    }
    const bool pass = witnessed == total && total == 300 && false_witnesses == 0;
    return {pass, std::to_string(witnessed) + "/300 witnessed, " +
                      std::to_string(false_witnesses) + " false witnesses"};
}

Outcome criterion_membership_laws() {
    int violations = 0;
    for (const auto& q : g_members)
        if (!laws_hold(q)) ++violations;
    return {violations == 0 && !g_members.empty(),
            std::to_string(g_members.size()) + " members checked, " +
                std::to_string(violations) + " violations"};
}

Outcome criterion_r1_collapse() {
    int ok = 0;
    for (int s = 0; s < 100; ++s) {
        Rng rng(Rng::derive(70'000, s));
        const int d = 1 + s % 3;
        const QuotPoint q = random_tilde_q_point(1, d, rng);
        if (is_in_tilde_q(q) && is_in_q(q)) ++ok;
    }
    return {ok == 100, std::to_string(ok) + "/100 ambient members lie in the symplectic locus"};
}

Outcome criterion_equivariance() {
    int ok = 0;
    for (int s = 0; s < 50; ++s) {
        Rng rng(Rng::derive(80'000, s));
        const int r = 1 + s % 3;
        const int d = 1 + s % 2;
        const SymplecticSpace space = standard_form(r);
        const QuotPoint q = random_q_member(r, d, rng, true);
        const SymplecticMatrix m = random_symplectic(space, rng);
        const QuotPoint moved = apply_group(m, q);
        const bool good = is_in_tilde_q(moved) == is_in_tilde_q(q) &&
                          is_in_q(moved) == is_in_q(q) &&
                          divisor_map(moved) == divisor_map(q) &&
                          hom_space_dimension(moved) == hom_space_dimension(q) &&
                          symplectic_tangent_dimension(moved) == symplectic_tangent_dimension(q);
        if (good) ++ok;
    }
    return {ok == 50, std::to_string(ok) + "/50 pairs invariant under the action"};
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Outcome criterion_cli_determinism() {
    if (g_cli_path.empty()) return {false, "CLI path missing (pass it as argv[1])"};
    const fs::path dir = fs::temp_directory_path() / "sympquot-acceptance";
    fs::create_directories(dir);

    const int k1 = QuotPoint::default_truncation(1, 1);
    JetMatrix diag(2, 2, k1);
    diag.at(0, 0) = Jet::variable(k1);
    diag.at(1, 1) = Jet::constant(k1, Scalar(1));
    const QuotPoint member(1, 1, {{SupportPoint{Scalar(0)}, std::move(diag)}});
    const std::string member_path = (dir / "member.json").string();
    std::ofstream(member_path) << to_json(member).dump(2) << "\n";

    ScalarMatrix bad(4, 2);
    bad.at(0, 0) = Scalar(1);
    bad.at(2, 1) = Scalar(1);
    const int k2 = QuotPoint::default_truncation(2, 1);
    const QuotPoint nonmember(2, 1,
                              {{SupportPoint{Scalar(0)}, subspace_quotient_model(bad, 1, k2)}});
    const std::string nonmember_path = (dir / "nonmember.json").string();
    std::ofstream(nonmember_path) << to_json(nonmember).dump(2) << "\n";

    const std::string points_path = (dir / "points.json").string();
    std::ofstream(points_path) << R"(["0", "1"])" << "\n";
    const std::string lags_path = (dir / "lags.json").string();
    std::ofstream(lags_path) << R"([
      [["1","0"],["0","1"],["1","2"],["2","3"]],
      [["1","0"],["0","1"],["0","0"],["0","0"]]
    ])" << "\n";

    const std::string commands[] = {
        "check --input " + member_path,
        "check --input " + nonmember_path,
        "divisor --input " + member_path,
        "tangent --input " + member_path,
        "fiber --points " + points_path + " --lagrangians " + lags_path,
        "sample --r 2 --d 2 --seed 42",
        "sample --r 3 --d 1 --seed 7 --kind tildeq",
        "sample --r 1 --d 3 --seed 1 --kind q-nonreduced",
        "report --r 2 --d 2 --samples 3 --seed 11",
        "effectiveness --r 2 --seed 5 --samples 50",
    };
    int ok = 0;
    for (const auto& cmd : commands) {
        const RunResult a = run_cli(cmd);
        const RunResult b = run_cli(cmd);
        if (a.exit_code == b.exit_code && a.out == b.out && !a.out.empty()) ++ok;
    }
    return {ok == 10, std::to_string(ok) + "/10 command lines byte-identical on repeat"};
}

Outcome criterion_truncation_robustness() {
    if (g_reduced_members.empty()) return {false, "no members retained from criterion 3"};
    int checked = 0;
    for (size_t i = 0; i < g_reduced_members.size(); ++i) {
        const QuotPoint& q = g_reduced_members[i];
        const QuotPoint doubled = q.with_truncation(2 * q.truncation());
        if (symplectic_tangent_dimension(doubled) != g_reduced_tangent_dims[i])
            return {false, "tangent dimension changed under doubled K"};
        ++checked;
    }
    for (const auto& q : g_members) {
        const QuotPoint doubled = q.with_truncation(2 * q.truncation());
        if (divisor_map(doubled) != divisor_map(q) || !laws_hold(doubled))
            return {false, "membership law values changed under doubled K"};
        ++checked;
    }
    return {true, std::to_string(checked) + " recomputations unchanged under doubled K"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];
    int failures = 0;
    failures += run_criterion(1, "Lagrangian Grassmannian chart dimension",
                              criterion_chart_dimension);
    failures += run_criterion(2, "ambient Quot tangent dimension 2 r^2 d",
                              criterion_hom_dimension);
    failures += run_criterion(3, "symplectic Quot dimension d(r^2+r+2)/2",
                              criterion_tangent_dimension);
    failures += run_criterion(4, "fiber isomorphism round trip", criterion_fiber_round_trip);
    failures += run_criterion(5, "projective symplectic action effectiveness",
                              criterion_effectiveness);
    failures += run_criterion(6, "membership laws (degree saturation, colength = r m)",
                              criterion_membership_laws);
    failures += run_criterion(7, "r = 1 collapse", criterion_r1_collapse);
    failures += run_criterion(8, "equivariance under the symplectic action",
                              criterion_equivariance);
    failures += run_criterion(9, "CLI determinism", criterion_cli_determinism);
    failures += run_criterion(10, "truncation robustness", criterion_truncation_robustness);
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
