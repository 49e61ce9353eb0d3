#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "turbdiff/errors.hpp"
#include "turbdiff/linalg.hpp"
#include "turbdiff/params.hpp"

namespace turbdiff {

// Surface area of the unit sphere S^{d-1} in R^d.
inline double sphere_area(int d) {
    if (d < 2) throw DimensionTooSmallError(d);
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// d x d symmetric PSD spectral tensor at one wavevector.
struct SpectralTensor {
    int d = 0;
    std::vector<double> value;  // row-major d*d

    double operator()(int i, int j) const { return value[static_cast<std::size_t>(i) * d + j]; }
};

// a(|k|) |k|^{-(2 alpha + d - 2)} (I - k k^T / |k|^2). Zero matrix beyond the
// shape support. k = 0 is outside the domain: the power law is singular there
// and every downstream sampler/quadrature gives {0} measure zero.
inline SpectralTensor spectral_density(const ModelParams& p, std::span<const double> k) {
    const int d = p.d;
    double k2 = dot(k, k);
    if (k2 == 0.0) throw ZeroWavevectorError();
    double kn = std::sqrt(k2);
    SpectralTensor out;
    out.d = d;
    out.value.assign(static_cast<std::size_t>(d) * d, 0.0);
    double amp = p.shape(kn);
    if (amp == 0.0) return out;
    double scale = amp * std::pow(kn, -(2.0 * p.alpha + d - 2.0));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double proj = (i == j ? 1.0 : 0.0) - k[i] * k[j] / k2;
            out.value[static_cast<std::size_t>(i) * d + j] = scale * proj;
        }
    }
    return out;
}

// exp(-|k|^{2 beta} t): per-wavenumber temporal decorrelation.
inline double time_correlation(const ModelParams& p, double k_norm, double t) {
    return std::exp(-std::pow(k_norm, 2.0 * p.beta) * t);
}

// Constant c such that shell_energy(k) = c * a(k) * k^{1-2 alpha}. Chosen so
// that the integral of shell_energy over (0, cutoff] equals the total energy
// E|V(0,0)|^2 = integral of tr R-hat over R^d; recorded in run manifests since
// the normalization is a convention of this artifact.
inline double shell_energy_constant(const ModelParams& p) {
    return sphere_area(p.d) * (p.d - 1);
}

// Spectral mass density on the sphere of radius k_norm (trace-normalized):
// integral over (0, cutoff] reproduces E|V(0,0)|^2.
inline double shell_energy(const ModelParams& p, double k_norm) {
    return shell_energy_constant(p) * p.shape(k_norm) * std::pow(k_norm, 1.0 - 2.0 * p.alpha);
}

// Scalar radial mass density a(k) k^{1-2 alpha}; the measure that mode
// sampling stratifies and the kubo-module integrals reduce to.
inline double radial_mass_density(const ModelParams& p, double k_norm) {
    return p.shape(k_norm) * std::pow(k_norm, 1.0 - 2.0 * p.alpha);
}

}  // namespace turbdiff
