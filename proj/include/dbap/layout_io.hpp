#pragma once

// Layout document parsing/serialization, the built-in presets, and the CSV
// writers for sweep tables and SPL heatmaps.
//
// Layout documents are JSON:
//   { "dims": 2,
//     "speakers": [ { "pos": [x, y], "weight": 1.0 }, ... ],
//     "reference": [x, y] }
// "weight" defaults to 1, "reference" to the centroid.

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dbap/analysis.hpp"

namespace dbap {

namespace detail {

inline std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    const std::size_t stop = std::min(byte, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

inline double finite_number(const nlohmann::json& j, const std::string& what) {
    if (!j.is_number()) throw ValidationError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(what + " is not finite");
    return v;
}

inline Point point_from_array(const nlohmann::json& arr, std::size_t dims,
                              const std::string& what) {
    if (!arr.is_array()) throw ValidationError(what + " must be a coordinate array");
    if (arr.size() != dims) {
        throw ValidationError(what + " has " + std::to_string(arr.size()) +
                              " coordinates, expected " + std::to_string(dims));
    }
    const double x = finite_number(arr[0], what);
    const double y = finite_number(arr[1], what);
    return dims == 3 ? Point(x, y, finite_number(arr[2], what)) : Point(x, y);
}

inline void append_fixed9(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    out += buf;
}

inline std::string fixed9(double v) {
    std::string s;
    append_fixed9(s, v);
    return s;
}

}  // namespace detail

inline Layout parse_layout(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw ParseError(e.what(), detail::line_of_byte(text, byte));
    } catch (const nlohmann::json::exception& e) {
        // e.g. out_of_range on overflowing number literals
        throw ValidationError(std::string("layout document rejected: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("layout document must be a JSON object");
    if (!doc.contains("dims") || !doc["dims"].is_number_integer()) {
        throw ValidationError("layout document needs an integer \"dims\" field");
    }
    const auto dims_value = doc["dims"].get<long long>();
    if (dims_value != 2 && dims_value != 3) {
        throw ValidationError("\"dims\" must be 2 or 3");
    }
    const std::size_t dims = static_cast<std::size_t>(dims_value);

    if (!doc.contains("speakers") || !doc["speakers"].is_array()) {
        throw ValidationError("layout document needs a \"speakers\" array");
    }
    const auto& speakers_json = doc["speakers"];
    if (speakers_json.empty()) throw ValidationError("layout has zero speakers");

    std::vector<Point> speakers;
    std::vector<double> weights;
    speakers.reserve(speakers_json.size());
    weights.reserve(speakers_json.size());
    for (std::size_t i = 0; i < speakers_json.size(); ++i) {
        const auto& s = speakers_json[i];
        const std::string label = "speaker " + std::to_string(i);
        if (!s.is_object() || !s.contains("pos")) {
            throw ValidationError(label + " needs a \"pos\" coordinate array");
        }
        speakers.push_back(detail::point_from_array(s["pos"], dims, label + ": pos"));
        double w = 1.0;
        if (s.contains("weight")) {
            w = detail::finite_number(s["weight"], label + ": weight");
            if (!(w > 0.0)) throw ValidationError(label + ": weight must be positive");
        }
        weights.push_back(w);
    }

    std::optional<Point> reference;
    if (doc.contains("reference")) {
        reference = detail::point_from_array(doc["reference"], dims, "reference");
    }
    return Layout(std::move(speakers), std::move(weights), reference);
}

inline std::string serialize_layout(const Layout& layout) {
    nlohmann::json doc;
    doc["dims"] = layout.dims();
    nlohmann::json speakers = nlohmann::json::array();
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const Point& p = layout.speakers()[i];
        nlohmann::json s;
        s["pos"] = layout.dims() == 3 ? nlohmann::json{p.x(), p.y(), p.z()}
                                      : nlohmann::json{p.x(), p.y()};
        s["weight"] = layout.weights()[i];
        speakers.push_back(std::move(s));
    }
    doc["speakers"] = std::move(speakers);
    const Point& r = layout.reference();
    doc["reference"] = layout.dims() == 3 ? nlohmann::json{r.x(), r.y(), r.z()}
                                          : nlohmann::json{r.x(), r.y()};
    return doc.dump(2) + "\n";
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"grid3x3", "asym10", "quad", "nonagon"};
    return names;
}

// Built-in test layouts. grid3x3 orders speakers row-major from the bottom
// row up, so speaker 2 is the (5, -5) corner; all presets reference the
// origin.
inline Layout preset(std::string_view name) {
    if (name == "grid3x3") {
        std::vector<Point> sp;
        for (double y : {-5.0, 0.0, 5.0}) {
            for (double x : {-5.0, 0.0, 5.0}) sp.emplace_back(x, y);
        }
        return Layout(std::move(sp), {}, Point(0.0, 0.0));
    }
    if (name == "asym10") {
        std::vector<Point> sp = {{-2.0, -1.0}, {-2.5, 5.0},  {1.0, -5.0},  {-9.5, 9.0},
                                 {-1.0, 2.0},  {9.5, -2.0},  {-2.0, -10.0}, {-3.5, 4.5},
                                 {4.0, 4.0},   {-9.5, -1.5}};
        return Layout(std::move(sp), {}, Point(0.0, 0.0));
    }
    if (name == "quad") {
        std::vector<Point> sp;
        for (double deg : {45.0, 135.0, 225.0, 315.0}) {
            const double rad = deg * std::numbers::pi / 180.0;
            sp.emplace_back(5.0 * std::cos(rad), 5.0 * std::sin(rad));
        }
        return Layout(std::move(sp), {}, Point(0.0, 0.0));
    }
    if (name == "nonagon") {
        std::vector<Point> sp;
        for (int k = 0; k < 9; ++k) {
            const double rad = 2.0 * std::numbers::pi * k / 9.0;
            sp.emplace_back(5.0 * std::cos(rad), 5.0 * std::sin(rad));
        }
        return Layout(std::move(sp), {}, Point(0.0, 0.0));
    }
    throw ValidationError("unknown preset '" + std::string(name) +
                          "'; valid presets: grid3x3, asym10, quad, nonagon");
}

// Header `sample,theta,x,y[,z],p,hull_distance,power,g0,...`; fixed 9
// decimal places, LF line endings, no trailing separators.
inline std::string write_sweep_csv(const SweepTable& table) {
    std::string out;
    out += "sample,theta,x,y";
    if (table.dims == 3) out += ",z";
    out += ",p,hull_distance,power";
    for (std::size_t i = 0; i < table.n_speakers; ++i) {
        out += ",g";
        out += std::to_string(i);
    }
    out += '\n';
    for (const SweepRow& row : table.rows) {
        if (row.gains.size() != table.n_speakers || row.position.dims() != table.dims) {
            throw ValidationError("sweep table is not rectangular");
        }
        out += std::to_string(row.sample);
        out += ',';
        detail::append_fixed9(out, row.theta);
        out += ',';
        detail::append_fixed9(out, row.position.x());
        out += ',';
        detail::append_fixed9(out, row.position.y());
        if (table.dims == 3) {
            out += ',';
            detail::append_fixed9(out, row.position.z());
        }
        out += ',';
        detail::append_fixed9(out, row.p);
        out += ',';
        detail::append_fixed9(out, row.hull_distance);
        out += ',';
        detail::append_fixed9(out, row.power);
        for (double g : row.gains) {
            out += ',';
            detail::append_fixed9(out, g);
        }
        out += '\n';
    }
    return out;
}

// First row: source-angle bin centers; first column: incoming-angle bin
// centers; the corner field is empty. Cells in dB.
inline std::string write_heatmap_csv(const SplHeatmap& map) {
    std::string out;
    for (double theta : map.source_angles) {
        out += ',';
        detail::append_fixed9(out, theta);
    }
    out += '\n';
    for (std::size_t j = 0; j < map.incoming_centers.size(); ++j) {
        detail::append_fixed9(out, map.incoming_centers[j]);
        if (map.cells_db[j].size() != map.source_angles.size()) {
            throw ValidationError("heatmap grid is not rectangular");
        }
        for (double cell : map.cells_db[j]) {
            out += ',';
            detail::append_fixed9(out, cell);
        }
        out += '\n';
    }
    return out;
}

}  // namespace dbap
