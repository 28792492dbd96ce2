// sympquot: exact local models of the symplectic Quot scheme.
//
// Subcommands construct points (sample, fiber), decide membership and
// extract divisors (check, divisor), compute tangent dimensions
// (tangent), sweep the dimension formulas over a grid (report) and
// exercise the projective symplectic action (effectiveness). All output
// is exact: rationals are "p/q" strings, never floats, and identical
// invocations produce byte-identical JSON.
//
// Exit codes: 0 success/verified, 2 usage or parse error, 3 membership
// false, 4 formula mismatch (bug sentinel).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sympquot/io.hpp"
#include "sympquot/version.hpp"

namespace {

using namespace sympquot;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_nonmember = 3;
constexpr int exit_mismatch = 4;

struct CommandError : std::runtime_error {
    int code;
    CommandError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CommandError(exit_usage, "cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& payload, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw CommandError(exit_usage, "cannot open output file: " + output_path);
    out << payload;
}

void emit(const json& doc, const std::string& text, const std::string& format,
          const std::string& output_path) {
    write_output(format == "text" ? text : doc.dump(2) + "\n", output_path);
}

json provenance(std::optional<int> r, std::optional<int> d, std::optional<int> k,
                std::optional<std::uint64_t> seed) {
    return json{{"r", r ? json(*r) : json()},
                {"d", d ? json(*d) : json()},
                {"K", k ? json(*k) : json()},
                {"seed", seed ? json(*seed) : json()},
                {"tool_version", tool_version}};
}

/// Effective truncation order: the 2rd+1 cap, raised by SYMPQUOT_MAX_K
/// and by `floor` (e.g. the order an input file already uses). Lowering
/// below the cap is a usage error; raising never changes any result.
int effective_truncation(int r, int d, int floor = 0) {
    int k = std::max(QuotPoint::default_truncation(r, d), floor);
    if (const char* env = std::getenv("SYMPQUOT_MAX_K")) {
        int v = 0;
        try {
            v = std::stoi(env);
        } catch (...) {
            throw CommandError(exit_usage, "SYMPQUOT_MAX_K: not an integer");
        }
        if (v < QuotPoint::default_truncation(r, d))
            throw CommandError(exit_usage,
                               "SYMPQUOT_MAX_K " + std::to_string(v) + " below the safety cap " +
                                   std::to_string(QuotPoint::default_truncation(r, d)));
        k = std::max(k, v);
    }
    return k;
}

QuotPoint load_quot_point(const std::string& path) {
    const QuotPoint q = quot_point_from_json(parse_document(read_file(path)));
    const int k = effective_truncation(q.r(), q.d(), q.truncation());
    return k == q.truncation() ? q : q.with_truncation(k);
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& input, const std::string& format, const std::string& output) {
    const QuotPoint q = load_quot_point(input);
    const bool tilde = is_in_tilde_q(q);
    const bool member = tilde && is_in_q(q);
    json doc{{"provenance", provenance(q.r(), q.d(), q.truncation(), std::nullopt)},
             {"in_tilde_q", tilde},
             {"in_q", member},
             {"total_colength", total_colength(q)},
             {"divisor", tilde ? to_json(divisor_map(q)) : json()},
             {"perfect_pairing", member ? json(perfect_pairing_check(q)) : json()}};
    std::ostringstream text;
    text << "in_tilde_q: " << (tilde ? "true" : "false") << "\n"
         << "in_q: " << (member ? "true" : "false") << "\n"
         << "total_colength: " << total_colength(q) << "\n";
    if (tilde)
        for (const auto& [p, m] : divisor_map(q).pairs)
            text << "divisor: " << p.coordinate.to_string() << " x" << m << "\n";
    if (member)
        text << "perfect_pairing: " << (perfect_pairing_check(q) ? "true" : "false") << "\n";
    emit(doc, text.str(), format, output);
    return member ? exit_ok : exit_nonmember;
}

int cmd_divisor(const std::string& input, const std::string& format, const std::string& output) {
    const QuotPoint q = load_quot_point(input);
    if (!is_in_tilde_q(q)) {
        emit(json{{"provenance", provenance(q.r(), q.d(), q.truncation(), std::nullopt)},
                  {"in_tilde_q", false}},
             "in_tilde_q: false\n", format, output);
        return exit_nonmember;
    }
    const DivisorMultiset div = divisor_map(q);
    json doc{{"provenance", provenance(q.r(), q.d(), q.truncation(), std::nullopt)},
             {"divisor", to_json(div)},
             {"degree", div.degree()}};
    std::ostringstream text;
    for (const auto& [p, m] : div.pairs) text << p.coordinate.to_string() << " x" << m << "\n";
    text << "degree: " << div.degree() << "\n";
    emit(doc, text.str(), format, output);
    return exit_ok;
}

int cmd_tangent(const std::string& input, const std::string& format, const std::string& output) {
    const QuotPoint q = load_quot_point(input);
    if (!is_in_q(q)) {
        emit(json{{"provenance", provenance(q.r(), q.d(), q.truncation(), std::nullopt)},
                  {"in_q", false}},
             "in_q: false\n", format, output);
        return exit_nonmember;
    }
    const DivisorMultiset div = divisor_map(q);
    const bool reduced = div.reduced() && div.degree() == q.d();
    json doc{{"provenance", provenance(q.r(), q.d(), q.truncation(), std::nullopt)},
             {"in_q", true},
             {"hom_dim", hom_space_dimension(q)},
             {"tangent_dim", symplectic_tangent_dimension(q)},
             {"divisor", to_json(div)},
             {"divisor_type", reduced ? "reduced" : "non-reduced"}};
    std::ostringstream text;
    text << "hom_dim: " << hom_space_dimension(q) << "\n"
         << "tangent_dim: " << symplectic_tangent_dimension(q) << "\n"
         << "divisor_type: " << (reduced ? "reduced" : "non-reduced") << "\n";
    emit(doc, text.str(), format, output);
    return exit_ok;
}

std::vector<SupportPoint> parse_points_file(const std::string& path) {
    json doc = parse_document(read_file(path));
    if (doc.is_object() && doc.contains("points")) doc = doc["points"];
    if (!doc.is_array() || doc.empty())
        throw ParseError("points file: expected a nonempty array of rational strings");
    std::vector<SupportPoint> pts;
    for (std::size_t i = 0; i < doc.size(); ++i)
        pts.push_back({io_detail::scalar_at(doc[i], "points[" + std::to_string(i) + "]")});
    return pts;
}

std::vector<ScalarMatrix> parse_lagrangians_file(const std::string& path) {
    json doc = parse_document(read_file(path));
    json lags = doc.is_object() && doc.contains("lagrangians") ? doc["lagrangians"] : doc;
    int r = 0;
    if (doc.is_object() && doc.contains("r") && doc["r"].is_number_integer()) {
        r = doc["r"].get<int>();
    } else {
        // infer r from the first frame shape: 2r rows of r entries
        if (!lags.is_array() || lags.empty() || !lags[0].is_array() || lags[0].empty() ||
            !lags[0][0].is_array())
            throw ParseError("lagrangians file: expected a nonempty array of 2r x r matrices");
        r = static_cast<int>(lags[0][0].size());
    }
    if (r < 1) throw ParseError("lagrangians file: r must be positive");
    return lagrangian_frames_from_json(lags, r);
}

int cmd_fiber(const std::string& points_path, const std::string& lagrangians_path,
              const std::string& format, const std::string& output) {
    const std::vector<SupportPoint> points = parse_points_file(points_path);
    const std::vector<ScalarMatrix> frames = parse_lagrangians_file(lagrangians_path);
    if (points.size() != frames.size())
        throw CommandError(exit_usage, "fiber: " + std::to_string(points.size()) + " points but " +
                                           std::to_string(frames.size()) + " lagrangians");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw CommandError(exit_usage,
                                   "fiber: repeated support point at indices " + std::to_string(i) +
                                       " and " + std::to_string(j));
    const int r = frames.front().cols();
    const SymplecticSpace space = standard_form(r);
    std::vector<LagrangianSubspace> subspaces;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!is_lagrangian(frames[i], space))
            throw CommandError(exit_usage,
                               "fiber: lagrangians[" + std::to_string(i) +
                                   "] is not a Lagrangian frame for r = " + std::to_string(r));
        subspaces.emplace_back(space, frames[i]);
    }
    QuotPoint q = from_lagrangians(points, subspaces);
    const int k = effective_truncation(q.r(), q.d(), q.truncation());
    if (k != q.truncation()) q = q.with_truncation(k);
    json doc = to_json(q);
    doc["provenance"] = provenance(q.r(), q.d(), q.truncation(), std::nullopt);
    emit(doc, doc.dump(2) + "\n", format, output);
    return exit_ok;
}

int cmd_sample(int r, int d, std::uint64_t seed, const std::string& kind,
               const std::string& format, const std::string& output) {
    const int k = effective_truncation(r, d);
    Rng rng(seed);
    std::optional<QuotPoint> q;
    if (kind == "q")
        q = random_q_member_reduced(r, d, rng, k);
    else if (kind == "q-nonreduced")
        q = random_q_member(r, d, rng, true, k);
    else if (kind == "tildeq")
        q = random_tilde_q_point(r, d, rng, k);
    else
        throw CommandError(exit_usage, "sample: unknown kind '" + kind + "'");
    json doc = to_json(*q);
    doc["provenance"] = provenance(r, d, k, seed);
    emit(doc, doc.dump(2) + "\n", format, output);
    return exit_ok;
}

int cmd_report(int r_max, int d_max, int samples, std::uint64_t seed, const std::string& format,
               const std::string& output) {
    DimensionReport report;
    try {
        report = dimension_report(r_max, d_max, samples, seed);
    } catch (const std::invalid_argument& e) {
        throw CommandError(exit_usage, e.what());
    }
    json doc = to_json(report);
    doc["provenance"] = provenance(r_max, d_max,
                                   effective_truncation(r_max, d_max), seed);
    doc["all_match"] = report.all_match();
    emit(doc, report_to_text(report), format, output);
    return report.all_match() ? exit_ok : exit_mismatch;
}

int cmd_effectiveness(int r, int trials, std::uint64_t seed, const std::string& format,
                      const std::string& output) {
    if (trials < 1) throw CommandError(exit_usage, "effectiveness: trials must be >= 1");
    const SymplecticSpace space = standard_form(r);
    const int matrix_count = 20;
    Rng rng(seed);
    json entries = json::array();
    bool verified = true;
    std::ostringstream text;

    auto witness_json = [](const LagrangianSubspace& v) {
        json rows = json::array();
        const ScalarMatrix b = v.canonical_basis();
        for (int i = 0; i < b.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < b.cols(); ++j) row.push_back(b.at(i, j).to_string());
            rows.push_back(std::move(row));
        }
        return rows;
    };

    // the center must never receive a witness
    for (const Scalar& sign : {Scalar(1), Scalar(-1)}) {
        ScalarMatrix c(2 * r, 2 * r);
        for (int i = 0; i < 2 * r; ++i) c.at(i, i) = sign;
        const SymplecticMatrix central(space, std::move(c));
        const auto w = effectiveness_witness(central, space, trials, rng.next_u64());
        if (w) verified = false;
        entries.push_back(json{{"central", true}, {"witness", json()}});
        text << "central " << (sign == Scalar(1) ? "+I" : "-I") << ": "
             << (w ? "WITNESS (unexpected)" : "no witness") << "\n";
    }

    int found = 0;
    int sampled = 0;
    while (sampled < matrix_count) {
        const SymplecticMatrix m = random_symplectic(space, rng);
        if (m.is_central()) continue;
        ++sampled;
        const auto w = effectiveness_witness(m, space, trials, rng.next_u64());
        const bool moved =
            w && !act_on_lagrangian(m, *w, space).same_span(*w);
        if (moved) ++found;
        else verified = false;
        entries.push_back(json{{"central", false}, {"witness", w ? witness_json(*w) : json()}});
    }
    text << "non-central with witness: " << found << "/" << matrix_count << "\n"
         << "verified: " << (verified ? "true" : "false") << "\n";

    json doc{{"provenance", provenance(r, std::nullopt, std::nullopt, seed)},
             {"trials", trials},
             {"matrices", std::move(entries)},
             {"verified", verified}};
    emit(doc, text.str(), format, output);
    return verified ? exit_ok : exit_mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symplectic Quot scheme toolkit"};
    app.require_subcommand(1);

    std::string input, points_path, lagrangians_path, output;
    std::string format = "json";
    std::string kind = "q";
    int r = 1, d = 1, samples = 50;
    std::uint64_t seed = 0;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
        cmd->add_option("--output", output);
    };

    CLI::App* check = app.add_subcommand("check", "membership verdict for a point file");
    check->add_option("--input", input)->required();
    add_format(check);

    CLI::App* divisor = app.add_subcommand("divisor", "divisor of a point file");
    divisor->add_option("--input", input)->required();
    add_format(divisor);

    CLI::App* tangent = app.add_subcommand("tangent", "tangent dimensions of a member");
    tangent->add_option("--input", input)->required();
    add_format(tangent);

    CLI::App* fiber = app.add_subcommand("fiber", "build the member over a reduced divisor");
    fiber->add_option("--points", points_path)->required();
    fiber->add_option("--lagrangians", lagrangians_path)->required();
    add_format(fiber);

    CLI::App* sample = app.add_subcommand("sample", "seeded random point");
    sample->add_option("--r", r)->required()->check(CLI::PositiveNumber);
    sample->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed)->required();
    sample->add_option("--kind", kind);
    add_format(sample);

    CLI::App* report = app.add_subcommand("report", "dimension verification over an (r, d) grid");
    report->add_option("--r", r)->required();
    report->add_option("--d", d)->required();
    report->add_option("--samples", samples)->required();
    report->add_option("--seed", seed)->required();
    add_format(report);

    CLI::App* effectiveness =
        app.add_subcommand("effectiveness", "witnesses that the projective action moves points");
    effectiveness->add_option("--r", r)->required()->check(CLI::PositiveNumber);
    effectiveness->add_option("--samples", samples);
    effectiveness->add_option("--seed", seed)->required();
    add_format(effectiveness);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (check->parsed()) return cmd_check(input, format, output);
        if (divisor->parsed()) return cmd_divisor(input, format, output);
        if (tangent->parsed()) return cmd_tangent(input, format, output);
        if (fiber->parsed()) return cmd_fiber(points_path, lagrangians_path, format, output);
        if (sample->parsed()) return cmd_sample(r, d, seed, kind, format, output);
        if (report->parsed()) return cmd_report(r, d, samples, seed, format, output);
        if (effectiveness->parsed()) return cmd_effectiveness(r, samples, seed, format, output);
    } catch (const CommandError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
