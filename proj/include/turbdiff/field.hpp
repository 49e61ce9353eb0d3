#pragma once

// Finite-mode synthesis of the Gaussian, homogeneous, isotropic,
// divergence-free velocity field with exact Ornstein-Uhlenbeck transitions in
// time. Wavevectors are stratified over logarithmic radial shells; each mode
// carries the exact spectral mass of its cell, a random direction, and an
// orthonormal frame of the plane perpendicular to it. Amplitudes are stored in
// that perpendicular frame so incompressibility is structural, not numerical.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "turbdiff/errors.hpp"
#include "turbdiff/kubo.hpp"
#include "turbdiff/params.hpp"
#include "turbdiff/quadrature.hpp"
#include "turbdiff/rng.hpp"
#include "turbdiff/spectrum.hpp"

namespace turbdiff {

struct ModeConfig {
    int n_shells = 32;
    int modes_per_shell = 8;
    double k_min_ratio = 1e-3;

    void validate() const {
        if (n_shells < 1) throw ConfigError("n_shells must be >= 1");
        if (modes_per_shell < 1) throw ConfigError("modes_per_shell must be >= 1");
        if (!(k_min_ratio > 0.0 && k_min_ratio < 1.0))
            throw ConfigError("k_min_ratio must be in (0, 1)");
    }
};

struct ModeSet {
    int d = 0;
    int n_modes = 0;
    double beta = 0.0;
    std::vector<double> k;            // n*d
    std::vector<double> k_norm;       // n
    std::vector<double> basis;        // n*(d-1)*d
    std::vector<double> weight;       // n, cell mass in the scalar spectral measure
    std::vector<double> sqrt_weight;  // n
    std::uint64_t seed = 0;
    std::uint64_t params_hash = 0;
    double total_mass = 0.0;            // sum of weights
    double stratification_error = 0.0;  // quadrature bound on the shell masses

    std::uint64_t digest() const {
        std::uint64_t h = params_hash;
        h = fnv1a64(&seed, sizeof(seed), h);
        h = fnv1a64(&n_modes, sizeof(n_modes), h);
        return h;
    }

    std::span<const double> wavevector(int m) const {
        return {k.data() + static_cast<std::size_t>(m) * d, static_cast<std::size_t>(d)};
    }
    std::span<const double> basis_vector(int m, int p) const {
        return {basis.data() + (static_cast<std::size_t>(m) * (d - 1) + p) * d,
                static_cast<std::size_t>(d)};
    }
};

struct FieldState {
    int d = 0;
    int n_modes = 0;
    double t = 0.0;
    std::uint64_t step = 0;  // advance counter; part of the RNG address
    std::uint64_t seed = 0;
    std::uint64_t modes_digest = 0;
    std::vector<double> xi;   // n*(d-1), cosine channel, unit stationary variance
    std::vector<double> eta;  // n*(d-1), sine channel
};

namespace field_rng {
inline constexpr std::uint32_t kTagAmplitude = 0x0a11ce01u;
inline constexpr std::uint32_t kTagRadius = 0x0a11ce02u;
inline constexpr std::uint32_t kTagDirection = 0x0a11ce03u;
}  // namespace field_rng

namespace detail {

// Orthonormal frame of the hyperplane perpendicular to unit vector khat.
// d = 2 uses the rotation by pi/2; general d takes the trailing columns of the
// Householder reflection mapping e1 onto -sign(khat_0) khat.
inline void perpendicular_frame(std::span<const double> khat, int d, double* out) {
    if (d == 2) {
        out[0] = -khat[1];
        out[1] = khat[0];
        return;
    }
    std::vector<double> v(khat.begin(), khat.end());
    double s = v[0] >= 0.0 ? 1.0 : -1.0;
    v[0] += s;
    double vn = norm(v);
    for (double& x : v) x /= vn;
    for (int p = 0; p < d - 1; ++p) {
        double* col = out + static_cast<std::size_t>(p) * d;
        for (int j = 0; j < d; ++j) col[j] = (j == p + 1 ? 1.0 : 0.0) - 2.0 * v[j] * v[p + 1];
    }
}

}  // namespace detail

// Precomputes shell masses and per-shell inverse-CDF tables once, then stamps
// out ModeSet realizations for arbitrary seeds. Shell masses come from the
// same graded quadrature the kubo module uses, so the discrete field carries
// the exact spectral mass of every cell.
class ModeSampler {
public:
    ModeSampler(const ModelParams& params, const ModeConfig& cfg)
        : params_(params), cfg_(cfg) {
        params.validate();
        cfg.validate();
        const double k_min = params.cutoff * cfg.k_min_ratio;
        const double ratio = params.cutoff / k_min;
        const auto breaks = params.shape.breakpoints();

        edges_.resize(cfg.n_shells + 1);
        for (int i = 0; i <= cfg.n_shells; ++i)
            edges_[i] = k_min * std::pow(ratio, static_cast<double>(i) / cfg.n_shells);
        edges_.back() = params.cutoff;

        const double sd = sphere_area(params.d);
        shells_.reserve(cfg.n_shells);
        for (int s = 0; s < cfg.n_shells; ++s) {
            Shell sh;
            sh.lo = edges_[s];
            sh.hi = edges_[s + 1];
            sh.knots.resize(kTable);
            sh.cdf.resize(kTable);
            double lr = std::log(sh.hi / sh.lo);
            for (int j = 0; j < kTable; ++j)
                sh.knots[j] = sh.lo * std::exp(lr * j / (kTable - 1));
            sh.knots.back() = sh.hi;
            double acc = 0.0, err = 0.0;
            sh.cdf[0] = 0.0;
            for (int j = 1; j < kTable; ++j) {
                auto r = quad::integrate([&](double k) { return radial_mass_density(params_, k); },
                                         sh.knots[j - 1], sh.knots[j], breaks, 1e-15, 1e-12);
                acc += r.value;
                err += r.abs_error;
                sh.cdf[j] = acc;
            }
            sh.mass = acc;
            total_mass_ += sd * acc;
            stratification_error_ += sd * err;
            shells_.push_back(std::move(sh));
        }
        if (!(total_mass_ > 0.0)) throw EmptySpectrumError();

        std::string blob = std::to_string(params_digest(params)) + "|" +
                           std::to_string(cfg.n_shells) + "|" + std::to_string(cfg.modes_per_shell) +
                           "|" + std::to_string(cfg.k_min_ratio);
        config_hash_ = fnv1a64(blob);
    }

    // Deterministic in (seed); zero-mass shells contribute no modes.
    ModeSet sample(std::uint64_t seed) const {
        const int d = params_.d;
        const double sd = sphere_area(d);
        ModeSet ms;
        ms.d = d;
        ms.beta = params_.beta;
        ms.seed = seed;
        ms.params_hash = config_hash_;
        ms.total_mass = total_mass_;
        ms.stratification_error = stratification_error_;

        std::vector<double> dir(d);
        int global_index = 0;
        for (const auto& sh : shells_) {
            if (!(sh.mass > 0.0)) {
                global_index += cfg_.modes_per_shell;
                continue;
            }
            const double w = sd * sh.mass / cfg_.modes_per_shell;
            for (int j = 0; j < cfg_.modes_per_shell; ++j, ++global_index) {
                const auto m = static_cast<std::uint32_t>(global_index);
                double u = uniform01(seed, m, 0, 0, field_rng::kTagRadius);
                double radius = invert_cdf(sh, u * sh.mass);

                double dn = 0.0;
                for (std::uint32_t attempt = 0; dn == 0.0; ++attempt) {
                    for (int c = 0; c < d; c += 2) {
                        auto np = normal_pair(seed, m, static_cast<std::uint32_t>(c), attempt,
                                              field_rng::kTagDirection);
                        dir[c] = np.z0;
                        if (c + 1 < d) dir[c + 1] = np.z1;
                    }
                    dn = norm(dir);
                }
                for (double& x : dir) x /= dn;

                ms.k_norm.push_back(radius);
                for (int c = 0; c < d; ++c) ms.k.push_back(radius * dir[c]);
                std::size_t boff = ms.basis.size();
                ms.basis.resize(boff + static_cast<std::size_t>(d - 1) * d);
                detail::perpendicular_frame(dir, d, ms.basis.data() + boff);
                ms.weight.push_back(w);
                ms.sqrt_weight.push_back(std::sqrt(w));
                ++ms.n_modes;
            }
        }
        return ms;
    }

    const ModelParams& params() const { return params_; }
    const ModeConfig& config() const { return cfg_; }
    const std::vector<double>& shell_edges() const { return edges_; }
    std::vector<double> shell_masses() const {
        std::vector<double> out;
        out.reserve(shells_.size());
        for (const auto& s : shells_) out.push_back(s.mass);
        return out;
    }
    double total_mass() const { return total_mass_; }
    // Horizon bound for a faithful surrogate: modes below k_min are absent, so
    // simulated times should satisfy t <= k_min^{-2 beta}.
    double validity_horizon() const {
        return std::pow(params_.cutoff * cfg_.k_min_ratio, -2.0 * params_.beta);
    }

private:
    static constexpr int kTable = 129;

    struct Shell {
        double lo, hi, mass = 0.0;
        std::vector<double> knots, cdf;
    };

    static double invert_cdf(const Shell& sh, double target) {
        auto it = std::lower_bound(sh.cdf.begin(), sh.cdf.end(), target);
        if (it == sh.cdf.begin()) return sh.knots.front();
        if (it == sh.cdf.end()) return sh.knots.back();
        std::size_t j = static_cast<std::size_t>(it - sh.cdf.begin());
        double dc = sh.cdf[j] - sh.cdf[j - 1];
        if (dc <= 0.0) return sh.knots[j];
        double t = (target - sh.cdf[j - 1]) / dc;
        return sh.knots[j - 1] + t * (sh.knots[j] - sh.knots[j - 1]);
    }

    ModelParams params_;
    ModeConfig cfg_;
    std::vector<double> edges_;
    std::vector<Shell> shells_;
    double total_mass_ = 0.0;
    double stratification_error_ = 0.0;
    std::uint64_t config_hash_ = 0;
};

inline ModeSet sample_modes(const ModelParams& params, const ModeConfig& cfg) {
    return ModeSampler(params, cfg).sample(params.seed);
}

// Stationary start: every amplitude component N(0, 1) in the perpendicular
// frame (the cell mass enters through sqrt_weight at evaluation).
inline FieldState init_state(const ModeSet& modes, std::uint64_t seed) {
    FieldState st;
    st.d = modes.d;
    st.n_modes = modes.n_modes;
    st.seed = seed;
    st.modes_digest = modes.digest();
    const int nc = modes.d - 1;
    st.xi.resize(static_cast<std::size_t>(modes.n_modes) * nc);
    st.eta.resize(static_cast<std::size_t>(modes.n_modes) * nc);
    for (int m = 0; m < modes.n_modes; ++m) {
        for (int c = 0; c < nc; ++c) {
            auto np = normal_pair(seed, 0, static_cast<std::uint32_t>(m),
                                  static_cast<std::uint32_t>(c), field_rng::kTagAmplitude);
            st.xi[static_cast<std::size_t>(m) * nc + c] = np.z0;
            st.eta[static_cast<std::size_t>(m) * nc + c] = np.z1;
        }
    }
    return st;
}

// Per-mode OU decay factors for a fixed dt, reusable across steps.
struct OuKernel {
    double dt = -1.0;
    std::vector<double> rho;
    std::vector<double> noise;  // sqrt(1 - rho^2)
};

inline OuKernel make_ou_kernel(const ModeSet& modes, double dt) {
    OuKernel kern;
    kern.dt = dt;
    kern.rho.resize(modes.n_modes);
    kern.noise.resize(modes.n_modes);
    for (int m = 0; m < modes.n_modes; ++m) {
        // underflow of rho is exact resampling
        double r = std::exp(-std::pow(modes.k_norm[m], 2.0 * modes.beta) * dt);
        kern.rho[m] = r;
        kern.noise[m] = std::sqrt(std::max(0.0, 1.0 - r * r));
    }
    return kern;
}

// Exact OU transition to t + dt. The noise for step j of mode m is addressed
// by (seed, j, m), independent of evaluation order and thread scheduling.
inline void advance(const ModeSet& modes, FieldState& state, const OuKernel& kern) {
    if (state.modes_digest != modes.digest()) throw ModeSetMismatchError();
    state.step += 1;
    state.t += kern.dt;
    if (kern.dt == 0.0) return;
    const int nc = modes.d - 1;
    const auto step32 = static_cast<std::uint32_t>(state.step & 0xffffffffu);
    const auto step_hi = static_cast<std::uint32_t>(state.step >> 32);
    for (int m = 0; m < modes.n_modes; ++m) {
        const double r = kern.rho[m];
        const double q = kern.noise[m];
        for (int c = 0; c < nc; ++c) {
            auto np = normal_pair(state.seed, step32, static_cast<std::uint32_t>(m),
                                  static_cast<std::uint32_t>(c) | (step_hi << 8),
                                  field_rng::kTagAmplitude);
            std::size_t idx = static_cast<std::size_t>(m) * nc + c;
            state.xi[idx] = r * state.xi[idx] + q * np.z0;
            state.eta[idx] = r * state.eta[idx] + q * np.z1;
        }
    }
}

inline void advance(const ModeSet& modes, FieldState& state, double dt) {
    if (!(dt >= 0.0)) throw ConfigError("advance requires dt >= 0");
    advance(modes, state, make_ou_kernel(modes, dt));
}

// v(x) = sum_m sqrt(w_m) [cos(k_m . x) B_m xi_m + sin(k_m . x) B_m eta_m].
// Divergence-free in x exactly: every B_m column is perpendicular to k_m.
inline void evaluate(const ModeSet& modes, const FieldState& state, std::span<const double> x,
                     std::span<double> v_out) {
    if (state.modes_digest != modes.digest()) throw ModeSetMismatchError();
    const int d = modes.d;
    for (int j = 0; j < d; ++j) v_out[j] = 0.0;
    if (d == 2) {
        double vx = 0.0, vy = 0.0;
        const double x0 = x[0], x1 = x[1];
        for (int m = 0; m < modes.n_modes; ++m) {
            const double* km = modes.k.data() + 2 * static_cast<std::size_t>(m);
            const double* bm = modes.basis.data() + 2 * static_cast<std::size_t>(m);
            double phase = km[0] * x0 + km[1] * x1;
            double a = modes.sqrt_weight[m] *
                       (std::cos(phase) * state.xi[m] + std::sin(phase) * state.eta[m]);
            vx += a * bm[0];
            vy += a * bm[1];
        }
        v_out[0] = vx;
        v_out[1] = vy;
        return;
    }
    const int nc = d - 1;
    for (int m = 0; m < modes.n_modes; ++m) {
        double phase = dot(modes.wavevector(m), x);
        double cw = modes.sqrt_weight[m] * std::cos(phase);
        double sw = modes.sqrt_weight[m] * std::sin(phase);
        for (int p = 0; p < nc; ++p) {
            double amp = cw * state.xi[static_cast<std::size_t>(m) * nc + p] +
                         sw * state.eta[static_cast<std::size_t>(m) * nc + p];
            auto b = modes.basis_vector(m, p);
            for (int j = 0; j < d; ++j) v_out[j] += amp * b[j];
        }
    }
}

inline std::vector<double> evaluate(const ModeSet& modes, const FieldState& state,
                                    std::span<const double> x) {
    std::vector<double> v(modes.d);
    evaluate(modes, state, x, v);
    return v;
}

// Exact spatial gradient G[j][i] = dv_j/dx_i; trace-free by construction.
inline std::vector<double> evaluate_gradient(const ModeSet& modes, const FieldState& state,
                                             std::span<const double> x) {
    if (state.modes_digest != modes.digest()) throw ModeSetMismatchError();
    const int d = modes.d;
    const int nc = d - 1;
    std::vector<double> g(static_cast<std::size_t>(d) * d, 0.0);
    for (int m = 0; m < modes.n_modes; ++m) {
        auto km = modes.wavevector(m);
        double phase = dot(km, x);
        double cw = modes.sqrt_weight[m] * std::cos(phase);
        double sw = modes.sqrt_weight[m] * std::sin(phase);
        for (int p = 0; p < nc; ++p) {
            double damp = -sw * state.xi[static_cast<std::size_t>(m) * nc + p] +
                          cw * state.eta[static_cast<std::size_t>(m) * nc + p];
            auto b = modes.basis_vector(m, p);
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i)
                    g[static_cast<std::size_t>(j) * d + i] += damp * b[j] * km[i];
        }
    }
    return g;
}

// --- binary snapshot (versioned, little-endian, fixed-width) ---------------

namespace snapshot {

inline constexpr char kMagic[4] = {'T', 'D', 'F', 'S'};
inline constexpr std::uint32_t kVersion = 1;

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& buf, double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, 8);
    put_u64(buf, v);
}
inline void put_f64v(std::string& buf, const std::vector<double>& xs) {
    put_u64(buf, xs.size());
    for (double x : xs) put_f64(buf, x);
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf.at(pos++))) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf.at(pos++))) << (8 * i);
        return v;
    }
    double f64() {
        std::uint64_t v = u64();
        double x;
        std::memcpy(&x, &v, 8);
        return x;
    }
    std::vector<double> f64v() {
        std::uint64_t n = u64();
        std::vector<double> xs(n);
        for (auto& x : xs) x = f64();
        return xs;
    }
};

}  // namespace detail

inline void save(const ModeSet& modes, const FieldState& state, const std::string& path) {
    std::string buf;
    buf.append(kMagic, 4);
    detail::put_u32(buf, kVersion);
    detail::put_u32(buf, static_cast<std::uint32_t>(modes.d));
    detail::put_u32(buf, static_cast<std::uint32_t>(modes.n_modes));
    detail::put_f64(buf, modes.beta);
    detail::put_u64(buf, modes.seed);
    detail::put_u64(buf, modes.params_hash);
    detail::put_f64(buf, modes.total_mass);
    detail::put_f64(buf, modes.stratification_error);
    detail::put_f64v(buf, modes.k);
    detail::put_f64v(buf, modes.k_norm);
    detail::put_f64v(buf, modes.basis);
    detail::put_f64v(buf, modes.weight);
    detail::put_f64(buf, state.t);
    detail::put_u64(buf, state.step);
    detail::put_u64(buf, state.seed);
    detail::put_u64(buf, state.modes_digest);
    detail::put_f64v(buf, state.xi);
    detail::put_f64v(buf, state.eta);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open snapshot file for writing: " + path);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw Error("snapshot write failed: " + path);
}

inline std::pair<ModeSet, FieldState> load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open snapshot file: " + path);
    std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (buf.size() < 8 || std::memcmp(buf.data(), kMagic, 4) != 0)
        throw Error("not a field snapshot: " + path);
    detail::Reader r{buf, 4};
    if (r.u32() != kVersion) throw Error("unsupported snapshot version in " + path);
    ModeSet modes;
    modes.d = static_cast<int>(r.u32());
    modes.n_modes = static_cast<int>(r.u32());
    modes.beta = r.f64();
    modes.seed = r.u64();
    modes.params_hash = r.u64();
    modes.total_mass = r.f64();
    modes.stratification_error = r.f64();
    modes.k = r.f64v();
    modes.k_norm = r.f64v();
    modes.basis = r.f64v();
    modes.weight = r.f64v();
    modes.sqrt_weight.resize(modes.weight.size());
    for (std::size_t i = 0; i < modes.weight.size(); ++i)
        modes.sqrt_weight[i] = std::sqrt(modes.weight[i]);
    FieldState st;
    st.d = modes.d;
    st.n_modes = modes.n_modes;
    st.t = r.f64();
    st.step = r.u64();
    st.seed = r.u64();
    st.modes_digest = r.u64();
    st.xi = r.f64v();
    st.eta = r.f64v();
    return {std::move(modes), std::move(st)};
}

}  // namespace snapshot

}  // namespace turbdiff
