#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace finform {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline Vec linspace(double lo, double hi, int n) {
    Vec out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

/// Axis-aligned box; lo/hi per coordinate.
struct Box {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }

    bool contains(const Vec& p, double tol = 0.0) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
        return true;
    }
};

/// All grid points of a box with `per_axis` samples per axis (row-major sweep).
std::vector<Vec> grid_points(const Box& box, int per_axis);

}  // namespace finform
