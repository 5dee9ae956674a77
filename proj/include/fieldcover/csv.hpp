#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldcover/geometry.hpp"
#include "fieldcover/planners.hpp"

namespace fieldcover {

/// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char shorter[64];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            std::sscanf(shorter, "%lf", &back);
            if (back == v) return shorter;
        }
    }
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double_field(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("csv: bad numeric field '" + s + "' in " + context);
    }
}

inline void write_plan_csv(const std::string& path, const MeasurementSet& samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "x,y,tag\n";
    for (std::size_t i = 0; i < samples.points.size(); ++i) {
        out << format_double(samples.points[i].x) << ',' << format_double(samples.points[i].y) << ','
            << to_string(samples.origin_tags[i]) << '\n';
    }
}

inline MeasurementSet read_plan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty plan file " + path);
    if (split_csv_line(line) != std::vector<std::string>{"x", "y", "tag"}) {
        throw std::runtime_error("csv: plan header must be x,y,tag in " + path);
    }
    MeasurementSet set;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw std::runtime_error("csv: plan row needs 3 fields in " + path);
        set.points.push_back({parse_double_field(fields[0], path), parse_double_field(fields[1], path)});
        set.origin_tags.push_back(sample_origin_from_string(fields[2]));
    }
    return set;
}

inline void write_tour_csv(const std::string& path, std::span<const int> order, std::span<const Point2> points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "seq,x,y\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Point2 p = points[static_cast<std::size_t>(order[i])];
        out << i << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
    }
}

/// Tour vertices in visiting order.
inline std::vector<Point2> read_tour_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty tour file " + path);
    if (split_csv_line(line) != std::vector<std::string>{"seq", "x", "y"}) {
        throw std::runtime_error("csv: tour header must be seq,x,y in " + path);
    }
    std::vector<Point2> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw std::runtime_error("csv: tour row needs 3 fields in " + path);
        pts.push_back({parse_double_field(fields[1], path), parse_double_field(fields[2], path)});
    }
    return pts;
}

}  // namespace fieldcover
