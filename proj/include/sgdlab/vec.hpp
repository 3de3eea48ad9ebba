#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace sgdlab {

// Parameter vector: the iterate theta lives in R^N, N >= 1, fixed per run.
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline bool all_finite(const Vec& a) {
    for (double x : a) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Divergence guard: a coordinate past this magnitude (or non-finite) flags
// the run as diverged instead of letting values propagate.
inline constexpr double kDivergenceGuard = 1e8;

inline bool within_guard(const Vec& a, double limit = kDivergenceGuard) {
    for (double x : a) {
        if (!std::isfinite(x) || std::abs(x) > limit) return false;
    }
    return true;
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

}  // namespace sgdlab
