#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "turbdiff/errors.hpp"

namespace turbdiff {

// Radial amplitude a(k) of the spectral density. A closed enum rather than an
// arbitrary callback so configs serialize and runs reproduce byte-for-byte.
class ShapeFn {
public:
    enum class Kind { Indicator, Bump, Tabulated };

    static ShapeFn indicator(double lo, double hi) {
        ShapeFn s;
        s.kind_ = Kind::Indicator;
        s.a_ = lo;
        s.b_ = hi;
        return s;
    }

    // C-infinity bump supported on [center-width, center+width], value 1 at center.
    static ShapeFn bump(double center, double width) {
        ShapeFn s;
        s.kind_ = Kind::Bump;
        s.a_ = center;
        s.b_ = width;
        return s;
    }

    // Piecewise-linear through (knots, values); zero outside [knots.front, knots.back].
    static ShapeFn tabulated(std::vector<double> knots, std::vector<double> values) {
        ShapeFn s;
        s.kind_ = Kind::Tabulated;
        s.knots_ = std::move(knots);
        s.values_ = std::move(values);
        return s;
    }

    Kind kind() const { return kind_; }

    double operator()(double k) const {
        switch (kind_) {
            case Kind::Indicator:
                return (k >= a_ && k <= b_) ? 1.0 : 0.0;
            case Kind::Bump: {
                double u = (k - a_) / b_;
                if (std::abs(u) >= 1.0) return 0.0;
                return std::exp(1.0 - 1.0 / (1.0 - u * u));
            }
            case Kind::Tabulated: {
                if (knots_.empty() || k < knots_.front() || k > knots_.back()) return 0.0;
                std::size_t i = 1;
                while (i < knots_.size() && knots_[i] < k) ++i;
                if (i == knots_.size()) return values_.back();
                double t = (k - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
                return values_[i - 1] + t * (values_[i] - values_[i - 1]);
            }
        }
        return 0.0;
    }

    // Points where the integrand loses smoothness; quadrature panels are split here.
    std::vector<double> breakpoints() const {
        switch (kind_) {
            case Kind::Indicator:
                return {a_, b_};
            case Kind::Bump:
                return {a_ - b_, a_, a_ + b_};
            case Kind::Tabulated:
                return knots_;
        }
        return {};
    }

    // Upper edge of the support (used to validate against the cutoff).
    double support_hi() const {
        switch (kind_) {
            case Kind::Indicator:
                return b_;
            case Kind::Bump:
                return a_ + b_;
            case Kind::Tabulated:
                return knots_.empty() ? 0.0 : knots_.back();
        }
        return 0.0;
    }

    void validate(double cutoff) const {
        switch (kind_) {
            case Kind::Indicator:
                if (!(0.0 <= a_ && a_ < b_ && b_ <= cutoff))
                    throw ConfigError("indicator shape requires 0 <= lo < hi <= cutoff");
                break;
            case Kind::Bump:
                if (!(b_ > 0.0)) throw ConfigError("bump shape requires width > 0");
                if (a_ + b_ > cutoff) throw ConfigError("bump shape support exceeds cutoff");
                break;
            case Kind::Tabulated: {
                if (knots_.size() < 2 || knots_.size() != values_.size())
                    throw ConfigError("tabulated shape needs matching knots/values, >= 2 points");
                for (std::size_t i = 1; i < knots_.size(); ++i)
                    if (!(knots_[i] > knots_[i - 1]))
                        throw ConfigError("tabulated shape knots must be strictly increasing");
                for (double v : values_)
                    if (!(v >= 0.0)) throw ConfigError("tabulated shape values must be nonnegative");
                if (knots_.front() < 0.0 || knots_.back() > cutoff)
                    throw ConfigError("tabulated shape support must lie in [0, cutoff]");
                break;
            }
        }
    }

    std::string serialize() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
            case Kind::Indicator:
                os << "indicator " << a_ << " " << b_;
                break;
            case Kind::Bump:
                os << "bump " << a_ << " " << b_;
                break;
            case Kind::Tabulated:
                os << "tabulated";
                for (std::size_t i = 0; i < knots_.size(); ++i)
                    os << " " << knots_[i] << " " << values_[i];
                break;
        }
        return os.str();
    }

    static ShapeFn parse(const std::string& text) {
        std::istringstream is(text);
        std::string word;
        if (!(is >> word)) throw ConfigError("empty shape spec");
        if (word == "indicator") {
            double lo, hi;
            if (!(is >> lo >> hi)) throw ConfigError("shape 'indicator' needs: lo hi");
            return indicator(lo, hi);
        }
        if (word == "bump") {
            double c, w;
            if (!(is >> c >> w)) throw ConfigError("shape 'bump' needs: center width");
            return bump(c, w);
        }
        if (word == "tabulated") {
            std::vector<double> ks, vs;
            double k, v;
            while (is >> k >> v) {
                ks.push_back(k);
                vs.push_back(v);
            }
            if (ks.size() < 2) throw ConfigError("shape 'tabulated' needs >= 2 (knot, value) pairs");
            return tabulated(std::move(ks), std::move(vs));
        }
        throw ConfigError("unknown shape kind '" + word + "'");
    }

    bool operator==(const ShapeFn& o) const {
        return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_ && knots_ == o.knots_ &&
               values_ == o.values_;
    }

    double param_a() const { return a_; }
    double param_b() const { return b_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

private:
    Kind kind_ = Kind::Indicator;
    double a_ = 0.0, b_ = 1.0;
    std::vector<double> knots_, values_;
};

}  // namespace turbdiff
