#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from first principles -- plain
// loops, no Eigen decompositions -- so a shared bug with the code under test
// is unlikely.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cssr/frame.hpp"

namespace oracle {

// Plain double-loop matrix-vector product.
inline std::vector<double> matvec(const std::vector<std::vector<double>>& a,
                                  const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += a[r][c] * x[c];
    return y;
}

inline int round_half_away(double v) {
    return v >= 0.0 ? static_cast<int>(std::floor(v + 0.5)) : -static_cast<int>(std::floor(-v + 0.5));
}

// Box mean of the m x m cell at output pixel (x, y), evaluated in doubles.
inline std::uint8_t box_mean(const cssr::VideoFrame& f, int m, int x, int y) {
    double sum = 0.0;
    for (int dy = 0; dy < m; ++dy)
        for (int dx = 0; dx < m; ++dx) sum += f.at(x * m + dx, y * m + dy);
    return static_cast<std::uint8_t>(round_half_away(sum / (m * m)));
}

// Scalar bilinear sample with half-pixel phase and edge clamp, one pixel at a
// time straight from the definition.
inline std::uint8_t bilinear_at(const cssr::VideoFrame& f, int m, int x, int y) {
    const auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
    const double sx = (x + 0.5) / m - 0.5;
    const double sy = (y + 0.5) / m - 0.5;
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    const int xl = clampi(x0, f.width - 1), xh = clampi(x0 + 1, f.width - 1);
    const int yl = clampi(y0, f.height - 1), yh = clampi(y0 + 1, f.height - 1);
    const double v = (1 - fx) * (1 - fy) * f.at(xl, yl) + fx * (1 - fy) * f.at(xh, yl) +
                     (1 - fx) * fy * f.at(xl, yh) + fx * fy * f.at(xh, yh);
    const int r = round_half_away(v);
    return static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

struct L0Solution {
    std::vector<int> support;
    std::vector<double> coeffs;  // aligned with support
    double residual_norm = std::numeric_limits<double>::infinity();
};

// Exhaustive minimum-residual search over supports of size <= 2. Least squares
// is solved by hand: 1x1 division and 2x2 normal equations via Cramer's rule.
inline L0Solution l0_search(const std::vector<std::vector<double>>& a,
                            const std::vector<double>& y, int kmax) {
    const int m = static_cast<int>(a.size());
    const int n = m > 0 ? static_cast<int>(a[0].size()) : 0;
    const auto col_dot = [&](int i, int j) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += a[r][i] * a[r][j];
        return s;
    };
    const auto col_dot_y = [&](int i) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += a[r][i] * y[r];
        return s;
    };
    const auto residual = [&](const std::vector<int>& sup, const std::vector<double>& c) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) {
            double v = y[r];
            for (std::size_t t = 0; t < sup.size(); ++t) v -= c[t] * a[r][sup[t]];
            s += v * v;
        }
        return std::sqrt(s);
    };

    L0Solution best;
    {
        double s = 0.0;
        for (double v : y) s += v * v;
        best.residual_norm = std::sqrt(s);  // empty support
    }
    for (int i = 0; i < n && kmax >= 1; ++i) {
        const double gii = col_dot(i, i);
        if (gii == 0.0) continue;
        const std::vector<double> c{col_dot_y(i) / gii};
        const double r = residual({i}, c);
        if (r < best.residual_norm) best = {{i}, c, r};
    }
    for (int i = 0; i < n && kmax >= 2; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double gii = col_dot(i, i), gjj = col_dot(j, j), gij = col_dot(i, j);
            const double det = gii * gjj - gij * gij;
            if (std::abs(det) < 1e-12) continue;
            const double bi = col_dot_y(i), bj = col_dot_y(j);
            const std::vector<double> c{(bi * gjj - bj * gij) / det, (bj * gii - bi * gij) / det};
            const double r = residual({i, j}, c);
            if (r < best.residual_norm) best = {{i, j}, c, r};
        }
    }
    return best;
}

// Minimum l1 over the solution line of a 2x3 equality system A s = y: the
// optimum of an LP sits at a vertex, i.e. a solution with one coordinate
// zeroed. Tries all three 2x2 subsystems and keeps the best.
struct L1Vertex {
    std::vector<double> s;
    double l1 = std::numeric_limits<double>::infinity();
};

inline L1Vertex l1_vertex_2x3(const std::vector<std::vector<double>>& a,
                              const std::vector<double>& y) {
    L1Vertex best;
    for (int drop = 0; drop < 3; ++drop) {
        const int i = drop == 0 ? 1 : 0;
        const int j = drop == 2 ? 1 : 2;
        const double det = a[0][i] * a[1][j] - a[0][j] * a[1][i];
        if (std::abs(det) < 1e-12) continue;
        const double si = (y[0] * a[1][j] - y[1] * a[0][j]) / det;
        const double sj = (a[0][i] * y[1] - a[1][i] * y[0]) / det;
        std::vector<double> s(3, 0.0);
        s[static_cast<std::size_t>(i)] = si;
        s[static_cast<std::size_t>(j)] = sj;
        const double l1 = std::abs(si) + std::abs(sj);
        if (l1 < best.l1) best = {s, l1};
    }
    return best;
}

// Byte-level Y4M construction, independent of the library writer.
inline std::string y4m_bytes(const std::string& header_line,
                             const std::vector<std::string>& frame_payloads) {
    std::string out = header_line + "\n";
    for (const std::string& payload : frame_payloads) out += "FRAME\n" + payload;
    return out;
}

}  // namespace oracle
