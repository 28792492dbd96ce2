#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sympquot/local_model.hpp"
#include "sympquot/tangent.hpp"

namespace sympquot {

using nlohmann::json;

/// Malformed input: message carries the offending field path or the
/// line:column of a syntax error.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline const json& field(const json& j, const char* name, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(where + ": missing field '" + name + "'");
    return *it;
}

inline int int_field(const json& j, const char* name, const std::string& where) {
    const json& f = field(j, name, where);
    if (!f.is_number_integer()) throw ParseError(where + "." + name + ": expected an integer");
    return f.get<int>();
}

inline Scalar scalar_at(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a rational string \"p/q\"");
    try {
        return Scalar::from_string(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace io_detail

inline json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("JSON syntax error at " + io_detail::line_col(text, e.byte) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// QuotPoint file format.

inline json to_json(const QuotPoint& q) {
    json models = json::array();
    for (const auto& m : q.models()) {
        json rows = json::array();
        for (int i = 0; i < m.presentation.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < m.presentation.cols(); ++j) {
                json coeffs = json::array();
                for (int c = 0; c < q.truncation(); ++c)
                    coeffs.push_back(m.presentation.at(i, j).coeff(c).to_string());
                row.push_back(std::move(coeffs));
            }
            rows.push_back(std::move(row));
        }
        models.push_back(json{{"point", m.point.coordinate.to_string()},
                              {"matrix", std::move(rows)}});
    }
    return json{{"r", q.r()}, {"d", q.d()}, {"truncation", q.truncation()},
                {"models", std::move(models)}};
}

inline QuotPoint quot_point_from_json(const json& j) {
    using io_detail::field;
    using io_detail::int_field;
    using io_detail::scalar_at;
    const int r = int_field(j, "r", "document");
    const int d = int_field(j, "d", "document");
    const int k = int_field(j, "truncation", "document");
    if (r < 1 || d < 1) throw ParseError("document: r and d must be positive");
    if (k < QuotPoint::default_truncation(r, d))
        throw ParseError("document.truncation: below the safety cap 2rd+1 = " +
                         std::to_string(QuotPoint::default_truncation(r, d)));
    const json& models = field(j, "models", "document");
    if (!models.is_array()) throw ParseError("document.models: expected an array");
    std::vector<LocalModel> out;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const std::string where = "models[" + std::to_string(mi) + "]";
        const json& pj = field(models[mi], "point", where);
        SupportPoint point{scalar_at(pj, where + ".point")};
        const json& mat = field(models[mi], "matrix", where);
        if (!mat.is_array() || static_cast<int>(mat.size()) != 2 * r)
            throw ParseError(where + ".matrix: expected 2r = " + std::to_string(2 * r) + " rows");
        JetMatrix a(2 * r, 2 * r, k);
        for (int i = 0; i < 2 * r; ++i) {
            const json& row = mat[i];
            if (!row.is_array() || static_cast<int>(row.size()) != 2 * r)
                throw ParseError(where + ".matrix[" + std::to_string(i) + "]: expected 2r entries");
            for (int c = 0; c < 2 * r; ++c) {
                const json& coeffs = row[c];
                const std::string entry =
                    where + ".matrix[" + std::to_string(i) + "][" + std::to_string(c) + "]";
                if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != k)
                    throw ParseError(entry + ": expected " + std::to_string(k) +
                                     " coefficient strings");
                Jet jet(k);
                for (int ci = 0; ci < k; ++ci)
                    jet.set_coeff(ci, scalar_at(coeffs[ci], entry + "[" + std::to_string(ci) + "]"));
                a.at(i, c) = std::move(jet);
            }
        }
        out.push_back({std::move(point), std::move(a)});
    }
    try {
        return QuotPoint(r, d, std::move(out), k);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Lagrangian tuple input.

struct LagrangianInput {
    int r = 0;
    std::vector<SupportPoint> points;
    std::vector<ScalarMatrix> frames;  // 2r x r each; Lagrangian-ness checked by the caller
};

inline std::vector<ScalarMatrix> lagrangian_frames_from_json(const json& lags, int r) {
    using io_detail::scalar_at;
    if (!lags.is_array() || lags.empty())
        throw ParseError("lagrangians: expected a nonempty array of 2r x r matrices");
    std::vector<ScalarMatrix> frames;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        const std::string where = "lagrangians[" + std::to_string(i) + "]";
        const json& mat = lags[i];
        if (!mat.is_array() || static_cast<int>(mat.size()) != 2 * r)
            throw ParseError(where + ": expected 2r = " + std::to_string(2 * r) + " rows");
        ScalarMatrix frame(2 * r, r);
        for (int row = 0; row < 2 * r; ++row) {
            if (!mat[row].is_array() || static_cast<int>(mat[row].size()) != r)
                throw ParseError(where + "[" + std::to_string(row) + "]: expected r entries");
            for (int col = 0; col < r; ++col)
                frame.at(row, col) = scalar_at(mat[row][col], where + "[" + std::to_string(row) +
                                                                  "][" + std::to_string(col) + "]");
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

inline LagrangianInput lagrangian_input_from_json(const json& j) {
    using io_detail::field;
    using io_detail::int_field;
    using io_detail::scalar_at;
    LagrangianInput in;
    in.r = int_field(j, "r", "document");
    if (in.r < 1) throw ParseError("document.r: must be positive");
    const json& pts = field(j, "points", "document");
    if (!pts.is_array() || pts.empty()) throw ParseError("document.points: expected a nonempty array");
    for (std::size_t i = 0; i < pts.size(); ++i)
        in.points.push_back({scalar_at(pts[i], "points[" + std::to_string(i) + "]")});
    in.frames = lagrangian_frames_from_json(field(j, "lagrangians", "document"), in.r);
    return in;
}

// ---------------------------------------------------------------------------
// Divisor and report serialization.

inline json to_json(const DivisorMultiset& div) {
    json arr = json::array();
    for (const auto& [p, m] : div.pairs)
        arr.push_back(json{{"point", p.coordinate.to_string()}, {"mult", m}});
    return arr;
}

inline json to_json(const DimensionReport& report) {
    json grid = json::array();
    for (const auto& row : report.rows) {
        json r{{"r", row.r},
               {"d", row.d},
               {"sample_seed", row.sample_seed},
               {"divisor_type", row.divisor_type},
               {"hom_dim", row.hom_dim},
               {"hom_expected", row.hom_expected},
               {"tangent_dim", row.tangent_dim},
               {"tangent_expected", row.tangent_expected ? json(*row.tangent_expected) : json()},
               {"match", row.match}};
        grid.push_back(std::move(r));
    }
    return json{{"grid", std::move(grid)}};
}

inline std::string report_to_text(const DimensionReport& report) {
    std::ostringstream os;
    os << "  r   d  divisor       hom  hom_exp  tangent  tan_exp  match\n";
    for (const auto& row : report.rows) {
        const std::string expected =
            row.tangent_expected ? std::to_string(*row.tangent_expected) : std::string("-");
        char line[160];
        std::snprintf(line, sizeof line, "%3d %3d  %-12s %5d %8d %8d %8s  %s\n",
                      row.r, row.d, row.divisor_type.c_str(), row.hom_dim, row.hom_expected,
                      row.tangent_dim, expected.c_str(), row.match ? "yes" : "NO");
        os << line;
    }
    os << (report.all_match() ? "all rows match\n" : "MISMATCH present\n");
    return os.str();
}

}  // namespace sympquot
