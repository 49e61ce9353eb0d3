#pragma once

#include <cstdint>
#include <string>

#include "turbdiff/errors.hpp"
#include "turbdiff/shape.hpp"

namespace turbdiff {

// Physical model: isotropic incompressible Gaussian field with spectral density
// a(|k|) |k|^{-(2 alpha + d - 2)} (I - k k^T/|k|^2) and per-mode relaxation rate
// |k|^{2 beta}.
struct ModelParams {
    int d = 2;
    double alpha = 0.25;
    double beta = 0.25;
    double cutoff = 1.0;
    ShapeFn shape = ShapeFn::indicator(0.0, 1.0);
    std::uint64_t seed = 0;

    void validate() const {
        if (d < 2) throw DimensionTooSmallError(d);
        if (!(alpha < 1.0)) throw ConfigError("alpha must be < 1 for an integrable spectrum");
        if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
        if (!(cutoff > 0.0)) throw ConfigError("cutoff must be > 0");
        shape.validate(cutoff);
    }
};

inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
    return fnv1a64(s.data(), s.size(), h);
}

inline std::uint64_t params_digest(const ModelParams& p) {
    std::string blob = std::to_string(p.d) + "|" + std::to_string(p.alpha) + "|" +
                       std::to_string(p.beta) + "|" + std::to_string(p.cutoff) + "|" +
                       p.shape.serialize() + "|" + std::to_string(p.seed);
    return fnv1a64(blob);
}

}  // namespace turbdiff
