#pragma once

// Deterministic quadrature of the Taylor-Kubo diffusivity, its resolvent
// regularization, and the diffusive/superdiffusive phase classification.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "turbdiff/linalg.hpp"
#include "turbdiff/params.hpp"
#include "turbdiff/quadrature.hpp"
#include "turbdiff/spectrum.hpp"

namespace turbdiff {

// Factor-of-2 bookkeeping. The one-sided time integral of the velocity
// correlation is half the Brownian covariance E[x_i x_j] = D*_ij t; every
// matrix carries its kind so the two can never be silently mixed.
enum class DiffusivityKind { OneSided, Covariance };

inline std::string to_string(DiffusivityKind k) {
    return k == DiffusivityKind::OneSided ? "one_sided" : "covariance";
}

struct DiffusivityMatrix {
    int d = 0;
    std::vector<double> value;  // row-major d*d, symmetric PSD
    DiffusivityKind kind = DiffusivityKind::OneSided;
    double abs_error_estimate = 0.0;

    double operator()(int i, int j) const { return value[static_cast<std::size_t>(i) * d + j]; }

    // 2x the one-sided integral; identity on matrices already of Covariance kind.
    DiffusivityMatrix as_covariance() const {
        DiffusivityMatrix out = *this;
        if (kind == DiffusivityKind::OneSided) {
            for (double& v : out.value) v *= 2.0;
            out.abs_error_estimate *= 2.0;
            out.kind = DiffusivityKind::Covariance;
        }
        return out;
    }
};

enum class Phase { Diffusive, Superdiffusive, Boundary };

inline std::string to_string(Phase p) {
    switch (p) {
        case Phase::Diffusive: return "diffusive";
        case Phase::Superdiffusive: return "superdiffusive";
        case Phase::Boundary: return "boundary";
    }
    return "?";
}

struct PhaseVerdict {
    Phase verdict = Phase::Boundary;
    double margin = 0.0;  // 1 - alpha - beta
};

// Classification is exact arithmetic on user inputs; the band only absorbs
// floating-point noise from computed alpha, beta.
inline constexpr double kPhaseBoundaryTol = 1e-9;

inline PhaseVerdict classify_phase(double alpha, double beta) {
    PhaseVerdict v;
    v.margin = 1.0 - alpha - beta;
    if (v.margin > kPhaseBoundaryTol)
        v.verdict = Phase::Diffusive;
    else if (v.margin < -kPhaseBoundaryTol)
        v.verdict = Phase::Superdiffusive;
    else
        v.verdict = Phase::Boundary;
    return v;
}

// Integral over the unit sphere of any diagonal entry of the incompressibility
// projector: ((d-1)/d) * S_{d-1}. Exact; the Monte Carlo angular oracle lives
// in tests only.
inline double angular_factor(int d) {
    if (d < 2) throw DimensionTooSmallError(d);
    return (d - 1.0) / d * sphere_area(d);
}

namespace detail {

// All isotropic d-dimensional spectral integrals reduce to
//   angular_factor(d) * int_0^K a(k) k^{1-2 alpha} g(k) dk.
template <class G>
DiffusivityMatrix radial_reduction(const ModelParams& p, const G& g, DiffusivityKind kind,
                                   double rel_tol = 1e-10) {
    auto f = [&](double k) { return radial_mass_density(p, k) * g(k); };
    auto r = quad::integrate_graded(f, p.cutoff, p.shape.breakpoints(), 1e-14, rel_tol);
    double af = angular_factor(p.d);
    DiffusivityMatrix out;
    out.d = p.d;
    out.value = scaled_identity(p.d, af * r.value);
    out.kind = kind;
    out.abs_error_estimate = af * r.abs_error;
    return out;
}

}  // namespace detail

// One-sided Taylor-Kubo matrix: diag entries ((d-1)/d) S_{d-1}
// int_0^K a(k) k^{1-2 alpha-2 beta} dk. Requires the diffusive phase.
inline DiffusivityMatrix taylor_kubo(const ModelParams& p, double rel_tol = 1e-10) {
    if (classify_phase(p.alpha, p.beta).verdict != Phase::Diffusive)
        throw DivergentIntegralError(p.alpha, p.beta);
    return detail::radial_reduction(
        p, [&](double k) { return std::pow(k, -2.0 * p.beta); }, DiffusivityKind::OneSided,
        rel_tol);
}

// Resolvent-regularized diffusivity: integrand k^{2 beta}/(k^{2 beta}+eps^2)^2
// against the spectral mass. Finite for every eps > 0 even when the
// Taylor-Kubo integral diverges, and converges to the OneSided matrix as
// eps -> 0, so it carries the OneSided tag. (Its role in the limit theorem is
// the Brownian covariance of the leading martingale; the factor-2 convention
// of this artifact keeps Covariance = 2x OneSided.)
inline DiffusivityMatrix regularized_diffusivity(const ModelParams& p, double eps,
                                                 double rel_tol = 1e-10) {
    if (!(eps > 0.0)) throw ConfigError("regularized diffusivity requires eps > 0");
    const double e2 = eps * eps;
    return detail::radial_reduction(
        p,
        [&](double k) {
            double r = std::pow(k, 2.0 * p.beta);
            double den = r + e2;
            return r / (den * den);
        },
        DiffusivityKind::OneSided, rel_tol);
}

// Eulerian correlation matrix R(t, 0): velocity covariance at t = 0, decaying
// by the per-mode exponential kernel for t > 0.
inline DiffusivityMatrix eulerian_correlation(const ModelParams& p, double t,
                                              double rel_tol = 1e-10) {
    if (!(t >= 0.0)) throw ConfigError("eulerian correlation requires t >= 0");
    return detail::radial_reduction(
        p, [&](double k) { return std::exp(-std::pow(k, 2.0 * p.beta) * t); },
        DiffusivityKind::OneSided, rel_tol);
}

// rms one-point speed sqrt(E|V|^2).
inline double velocity_rms(const ModelParams& p) {
    auto r0 = eulerian_correlation(p, 0.0);
    return std::sqrt(trace(r0.value, p.d));
}

// Integral timescale of the Eulerian correlation, tr K / tr R(0).
inline double correlation_time(const ModelParams& p) {
    auto k = taylor_kubo(p);
    auto r0 = eulerian_correlation(p, 0.0);
    return trace(k.value, p.d) / trace(r0.value, p.d);
}

}  // namespace turbdiff
