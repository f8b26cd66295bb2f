#pragma once

// Fixed numeric formatting shared by every artifact the CLI writes:
// 17 significant digits, '.' decimal separator, '\n' line endings.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlindblad/fock_ops.hpp"

namespace dlindblad {

inline std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    // "C" locale formatting; %g never emits a grouping separator.
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// JSON has no nan/inf; they become null.
inline std::string json_double(double x) { return std::isfinite(x) ? fmt_double(x) : "null"; }

inline std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::string json_array(std::span<const double> values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += json_double(values[i]);
    }
    return out + "]";
}

// [[[re, im], ...], ...], the same layout accepted by the "matrix" initial state.
inline std::string json_matrix(const CMatrix& m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out += r ? ",\n  [" : "\n  [";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ", ";
            out += "[" + json_double(m(r, c).real()) + ", " + json_double(m(r, c).imag()) + "]";
        }
        out += "]";
    }
    return out + "\n]";
}

inline void write_csv_row(std::ostream& os, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << fmt_double(values[i]);
    }
    os << '\n';
}

inline void write_csv_header(std::ostream& os, std::span<const std::string_view> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ',';
        os << names[i];
    }
    os << '\n';
}

}  // namespace dlindblad
