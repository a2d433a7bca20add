#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lapsmooth/common.hpp"

namespace lapsmooth {

/// Shortest round-trip decimal representation of a double.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Reads a headerless numeric CSV; every row must have the same width.
inline std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw input_error("non-numeric cell '" + cell + "' in " + path);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw input_error("ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error("empty CSV " + path);
    return rows;
}

inline PointCloud read_points_csv(const std::string& path) {
    const auto rows = read_csv_matrix(path);
    PointCloud pts;
    pts.n = rows.size();
    pts.d = static_cast<int>(rows.front().size());
    pts.coords.reserve(pts.n * static_cast<std::size_t>(pts.d));
    for (const auto& row : rows)
        for (double v : row) pts.coords.push_back(v);
    pts.validate();
    return pts;
}

inline std::vector<double> read_vector_csv(const std::string& path) {
    const auto rows = read_csv_matrix(path);
    if (rows.front().size() != 1) throw input_error(path + ": expected a single column");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[0]);
    return out;
}

inline void write_points_csv(const std::string& path, const PointCloud& pts) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    for (std::size_t i = 0; i < pts.n; ++i) {
        for (int k = 0; k < pts.d; ++k) {
            if (k) out << ',';
            out << fmt_double(pts.coord(i, k));
        }
        out << '\n';
    }
}

inline void write_vector_csv(const std::string& path, const std::vector<double>& v) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    for (double x : v) out << fmt_double(x) << '\n';
}

}  // namespace lapsmooth
