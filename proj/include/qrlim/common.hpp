#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrlim {

// A point of R^n, n >= 2. Dimension is carried by the vector length.
using Point = std::vector<double>;

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_same_dim(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
}

inline double dot(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const Point& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm(const Point& a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(dist_sq(a, b)); }

inline Point axis_point(int n, int axis, double value) {
    Point p(static_cast<std::size_t>(n), 0.0);
    p[static_cast<std::size_t>(axis)] = value;
    return p;
}

// e_1 scaled: t * e1 in R^n.
inline Point e1(int n, double t = 1.0) { return axis_point(n, 0, t); }

inline bool all_finite(const Point& p) {
    for (double v : p)
        if (!std::isfinite(v)) return false;
    return true;
}

// Thrown by iterative estimators that fail to reach their tolerance.
struct ConvergenceError : std::runtime_error {
    double last;
    double previous;
    ConvergenceError(const std::string& msg, double last_, double previous_)
        : std::runtime_error(msg), last(last_), previous(previous_) {}
};

}  // namespace qrlim
