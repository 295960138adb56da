#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "shapesum/common.hpp"
#include "shapesum/shapes.hpp"

namespace shapesum {

// Profile file format: a JSON array of [x, h] pairs, e.g.
//   [[0.0, 1.0], [0.5, 0.8], [1.0, 0.0]]
// The profile must satisfy every structural requirement; violations are
// collected and reported together.
inline ShapeSpec load_shape_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open shape file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("shape file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) {
        throw config_error("shape file " + path +
                           " must contain a JSON array of [x, h] pairs");
    }
    std::vector<std::pair<double, double>> pts;
    pts.reserve(doc.size());
    for (const auto& entry : doc) {
        if (!entry.is_array() || entry.size() != 2 ||
            !entry[0].is_number() || !entry[1].is_number()) {
            throw config_error("shape file " + path +
                               ": each entry must be a [x, h] number pair");
        }
        pts.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    auto shape = ShapeSpec::custom(std::move(pts));
    ensure_valid(shape);
    return shape;
}

// Shape argument grammar:
//   disk | diamond | rect:c=<positive float> | file:<path>
inline ShapeSpec parse_shape_arg(const std::string& arg) {
    if (arg == "disk") return ShapeSpec::disk();
    if (arg == "diamond") return ShapeSpec::diamond();
    if (arg.rfind("rect:c=", 0) == 0) {
        const std::string num = arg.substr(7);
        std::size_t consumed = 0;
        double c = 0.0;
        try {
            c = std::stod(num, &consumed);
        } catch (const std::exception&) {
            throw config_error("cannot parse rectangle half-width in '" + arg + "'");
        }
        if (consumed != num.size()) {
            throw config_error("trailing characters after rectangle half-width in '" +
                               arg + "'");
        }
        return ShapeSpec::rectangle(c);
    }
    if (arg.rfind("file:", 0) == 0) {
        return load_shape_file(arg.substr(5));
    }
    throw config_error(
        "unrecognized shape '" + arg +
        "' (expected disk, diamond, rect:c=<float>, or file:<path>)");
}

}  // namespace shapesum
