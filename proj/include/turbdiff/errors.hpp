#pragma once

#include <stdexcept>
#include <string>

namespace turbdiff {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroWavevectorError : Error {
    ZeroWavevectorError() : Error("spectral density is undefined at k = 0") {}
};

struct DimensionTooSmallError : Error {
    explicit DimensionTooSmallError(int d)
        : Error("dimension must be >= 2, got " + std::to_string(d)) {}
};

struct DivergentIntegralError : Error {
    DivergentIntegralError(double alpha, double beta)
        : Error("Taylor-Kubo integral diverges: alpha + beta = " +
                std::to_string(alpha + beta) + " >= 1 (margin " +
                std::to_string(1.0 - alpha - beta) + ")") {}
};

struct QuadratureError : Error {
    explicit QuadratureError(const std::string& msg) : Error("quadrature failure: " + msg) {}
};

struct EmptySpectrumError : Error {
    EmptySpectrumError() : Error("shape function is identically zero on the sampled range") {}
};

struct ModeSetMismatchError : Error {
    ModeSetMismatchError() : Error("field state was built from a different mode set") {}
};

struct StepOverflowError : Error {
    StepOverflowError(double displacement, double bound)
        : Error("step displacement " + std::to_string(displacement) +
                " exceeds bound " + std::to_string(bound) + "; dt too coarse") {}
};

struct TooFewTrajectoriesError : Error {
    explicit TooFewTrajectoriesError(int n)
        : Error("need at least 2 trajectories, got " + std::to_string(n)) {}
};

struct DegenerateWindowError : Error {
    explicit DegenerateWindowError(const std::string& msg) : Error("degenerate fit window: " + msg) {}
};

struct ReplayUnavailableError : Error {
    explicit ReplayUnavailableError(const std::string& msg) : Error("velocity replay unavailable: " + msg) {}
};

struct TailNotConvergedError : Error {
    explicit TailNotConvergedError(const std::string& msg)
        : Error("running integral has not plateaued: " + msg) {}
};

struct KindMismatchError : Error {
    KindMismatchError() : Error("refusing to compare diffusivity matrices of different kinds") {}
};

struct GridTooNarrowError : Error {
    explicit GridTooNarrowError(const std::string& msg) : Error("scaling grid too narrow: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace turbdiff
