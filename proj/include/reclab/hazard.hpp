#ifndef RECLAB_HAZARD_HPP
#define RECLAB_HAZARD_HPP

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace reclab {

enum class Family { Exponential, Weibull, LinearQuadratic };

/// A distribution represented through its cumulative hazard
/// H(x) = -ln(1 - F(x)) on the support (left_endpoint, inf).
///
/// Three families are built in:
///   Exponential     H(x) = c*(x - lf)        (scale c > 0, guarantee time lf)
///   Weibull         H(x) = c*x^alpha          (shape alpha > 0, support x > 0)
///   LinearQuadratic H(x) = x + x^2            (negative control, non-Weibull hazard)
///
/// Values are immutable after construction and safe to share across threads.
class HazardModel {
public:
    static HazardModel exponential(double c, double lf = 0.0) {
        if (!(c > 0.0)) throw std::invalid_argument("exponential: c must be positive");
        HazardModel m;
        m.family_ = Family::Exponential;
        m.c_ = c;
        m.lf_ = lf;
        return m;
    }

    static HazardModel weibull(double alpha, double c) {
        if (!(alpha > 0.0)) throw std::invalid_argument("weibull: alpha must be positive");
        if (!(c > 0.0)) throw std::invalid_argument("weibull: c must be positive");
        HazardModel m;
        m.family_ = Family::Weibull;
        m.c_ = c;
        m.alpha_ = alpha;
        m.lf_ = 0.0;
        return m;
    }

    static HazardModel linear_quadratic() {
        HazardModel m;
        m.family_ = Family::LinearQuadratic;
        m.lf_ = 0.0;
        return m;
    }

    Family family() const { return family_; }
    double scale() const { return c_; }
    double shape() const { return alpha_; }
    double left_endpoint() const { return lf_; }

    bool is_weibull_half() const {
        return family_ == Family::Weibull && std::abs(alpha_ - 0.5) <= 1e-12;
    }

    /// H(x); requires x > left endpoint.
    double hazard(double x) const {
        require_in_support(x);
        switch (family_) {
            case Family::Exponential: return c_ * (x - lf_);
            case Family::Weibull: return c_ * std::pow(x, alpha_);
            case Family::LinearQuadratic: return x + x * x;
        }
        return 0.0; // unreachable
    }

    /// H'(x), the hazard rate; strictly positive on the support.
    double rate(double x) const {
        require_in_support(x);
        switch (family_) {
            case Family::Exponential: return c_;
            case Family::Weibull: return c_ * alpha_ * std::pow(x, alpha_ - 1.0);
            case Family::LinearQuadratic: return 1.0 + 2.0 * x;
        }
        return 0.0; // unreachable
    }

    /// H^{-1}(y) for y > 0, in closed form for every family.
    double inverse(double y) const {
        if (!(y > 0.0)) throw std::domain_error("inverse hazard: y must be positive");
        switch (family_) {
            case Family::Exponential: return lf_ + y / c_;
            case Family::Weibull: return std::pow(y / c_, 1.0 / alpha_);
            case Family::LinearQuadratic:
                // x + x^2 = y  =>  x = (-1 + sqrt(1 + 4y)) / 2
                return 2.0 * y / (1.0 + std::sqrt(1.0 + 4.0 * y));
        }
        return 0.0; // unreachable
    }

    /// F(x) = 1 - exp(-H(x)); 0 at and below the left endpoint.
    double cdf(double x) const {
        if (x <= lf_) return 0.0;
        return -std::expm1(-hazard(x));
    }

    /// Canonical spec string, parseable by parse_model.
    std::string spec_string() const {
        char buf[128];
        switch (family_) {
            case Family::Exponential:
                std::snprintf(buf, sizeof buf, "exp:c=%.17g,lf=%.17g", c_, lf_);
                break;
            case Family::Weibull:
                std::snprintf(buf, sizeof buf, "weibull:alpha=%.17g,c=%.17g", alpha_, c_);
                break;
            case Family::LinearQuadratic:
                return "linquad";
        }
        return buf;
    }

private:
    HazardModel() = default;

    void require_in_support(double x) const {
        if (!(x > lf_))
            throw std::domain_error("x outside support: x must exceed the left endpoint");
    }

    Family family_ = Family::Exponential;
    double c_ = 1.0;
    double alpha_ = 1.0;
    double lf_ = 0.0;
};

namespace detail {

inline double parse_number_field(const std::string& text, const std::string& key,
                                 const std::string& spec) {
    auto eq = text.find('=');
    if (eq == std::string::npos || text.substr(0, eq) != key)
        throw std::invalid_argument("malformed dist spec '" + spec + "': expected " + key + "=<number>");
    const std::string value = text.substr(eq + 1);
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed dist spec '" + spec + "': bad number for " + key);
    }
    if (used != value.size() || !std::isfinite(parsed))
        throw std::invalid_argument("malformed dist spec '" + spec + "': bad number for " + key);
    return parsed;
}

} // namespace detail

/// Parses the dist-spec grammar shared with the CLI:
///   exp:c=<f>[,lf=<f>] | weibull:alpha=<f>,c=<f> | linquad
inline HazardModel parse_model(const std::string& spec) {
    if (spec == "linquad") return HazardModel::linear_quadratic();

    auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);

    if (head == "exp") {
        auto comma = rest.find(',');
        double c = detail::parse_number_field(rest.substr(0, comma), "c", spec);
        double lf = 0.0;
        if (comma != std::string::npos)
            lf = detail::parse_number_field(rest.substr(comma + 1), "lf", spec);
        if (!(c > 0.0)) throw std::invalid_argument("dist spec '" + spec + "': c must be positive");
        return HazardModel::exponential(c, lf);
    }
    if (head == "weibull") {
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed dist spec '" + spec + "': expected alpha=<f>,c=<f>");
        double alpha = detail::parse_number_field(rest.substr(0, comma), "alpha", spec);
        double c = detail::parse_number_field(rest.substr(comma + 1), "c", spec);
        if (!(alpha > 0.0) || !(c > 0.0))
            throw std::invalid_argument("dist spec '" + spec + "': alpha and c must be positive");
        return HazardModel::weibull(alpha, c);
    }
    throw std::invalid_argument("malformed dist spec '" + spec +
                                "': expected exp:..., weibull:... or linquad");
}

} // namespace reclab

#endif // RECLAB_HAZARD_HPP
