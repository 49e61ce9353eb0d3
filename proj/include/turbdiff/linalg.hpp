#pragma once

// Small dense helpers for runtime dimension d (typically 2 or 3).
// Vectors are contiguous double spans of length d, matrices row-major d*d.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace turbdiff {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Row-major symmetric matrix with isotropic value c on the diagonal.
inline std::vector<double> scaled_identity(int d, double c) {
    std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = c;
    return m;
}

inline double trace(std::span<const double> m, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += m[static_cast<std::size_t>(i) * d + i];
    return s;
}

inline double max_abs_offdiag(std::span<const double> m, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) s = std::max(s, std::abs(m[static_cast<std::size_t>(i) * d + j]));
    return s;
}

}  // namespace turbdiff
