#ifndef RECLAB_CONDITIONAL_HPP
#define RECLAB_CONDITIONAL_HPP

#include "reclab/hazard.hpp"
#include "reclab/polynomial.hpp"
#include "reclab/quadrature.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace reclab {

/// Conditioning frame for one record bracketed by two others: the target sits
/// gaps_below record steps above the lower covariate (value `lower`) and
/// gaps_above steps below the upper covariate (value `upper`).
struct Window {
    int gaps_below;
    int gaps_above;
    double lower;
    double upper;

    Window(int below, int above, double lo, double hi)
        : gaps_below(below), gaps_above(above), lower(lo), upper(hi) {
        if (below < 1 || above < 1)
            throw std::domain_error("window: both gap counts must be >= 1");
        if (!(hi - lo >= 1e-9 * std::max(1.0, std::abs(lo))))
            throw std::domain_error("window: covariates must satisfy lower < upper with margin");
    }

    void require_in_support(const HazardModel& model) const {
        if (!(lower >= model.left_endpoint()))
            throw std::domain_error("window: lower covariate lies below the left endpoint");
    }
};

/// H extended continuously to the left endpoint, where it vanishes. Lets a
/// window condition on u = l_F (e.g. R_1 at the guarantee time boundary).
inline double hazard_from_left(const HazardModel& model, double x) {
    return x == model.left_endpoint() ? 0.0 : model.hazard(x);
}

namespace detail {

// (i + j - 1)! / ((i - 1)!(j - 1)!) in log space; caps at i + j - 1 <= 170.
inline double log_window_norm(int i, int j) {
    if (i + j - 1 > 170)
        throw std::invalid_argument("window gaps too large: i + j - 1 must be <= 170");
    return std::lgamma(double(i + j)) - std::lgamma(double(i)) - std::lgamma(double(j));
}

} // namespace detail

/// Density at x of the record bracketed by the window, in the normalized form
///
///   (i+j-1)! / ((i-1)!(j-1)!) * W_{u,x}^{i-1} W_{x,v}^{j-1} / W_{u,v}^{i+j-1} * H'(x)
///
/// with W_{a,b} = H(b) - H(a). Integrates to 1 over (u, v).
inline double conditional_density(const HazardModel& model, const Window& w, double x) {
    w.require_in_support(model);
    if (!(x > w.lower && x < w.upper))
        throw std::domain_error("conditional density: x must lie strictly inside (lower, upper)");
    const int i = w.gaps_below, j = w.gaps_above;
    const double log_norm = detail::log_window_norm(i, j);
    const double h_u = hazard_from_left(model, w.lower);
    const double w_ux = model.hazard(x) - h_u;
    const double w_xv = model.hazard(w.upper) - model.hazard(x);
    const double w_uv = model.hazard(w.upper) - h_u;
    double log_density = log_norm - (i + j - 1) * std::log(w_uv);
    if (i > 1) log_density += (i - 1) * std::log(w_ux);
    if (j > 1) log_density += (j - 1) * std::log(w_xv);
    return std::exp(log_density) * model.rate(x);
}

/// E[ g(R) | window ] by Gauss-Legendre after the substitution
/// w = W_{u,x} / W_{u,v}, under which the weight becomes the Beta(i, j)
/// density and x = H^{-1}(H_u + w * W_{u,v}).
inline double conditional_expectation(const HazardModel& model, const Window& w,
                                      const std::function<double(double)>& g) {
    w.require_in_support(model);
    const int i = w.gaps_below, j = w.gaps_above;
    const double log_norm = detail::log_window_norm(i, j);
    const double h_u = hazard_from_left(model, w.lower);
    const double w_uv = model.hazard(w.upper) - h_u;
    return integrate01([&](double t) {
        double log_beta = log_norm;
        if (i > 1) log_beta += (i - 1) * std::log(t);
        if (j > 1) log_beta += (j - 1) * std::log1p(-t);
        const double x = model.inverse(h_u + t * w_uv);
        return g(x) * std::exp(log_beta);
    });
}

inline double conditional_expectation(const HazardModel& model, const Window& w) {
    return conditional_expectation(model, w, [](double x) { return x; });
}

/// Exponential closed form E[R_n | R_{n-k} = u, R_{n+r} = v] = (r u + k v) / (k + r).
inline double exponential_closed_form(int k, int r, double u, double v) {
    if (k < 1 || r < 1) throw std::invalid_argument("closed form: k and r must be >= 1");
    if (!(u < v)) throw std::invalid_argument("closed form: requires u < v");
    return (r * u + k * v) / double(k + r);
}

/// E[ R_n - R_m | R_{m-k} = u, R_{n+r} = v ], evaluated by linearity as the
/// difference of the two bracketed-record expectations.
inline double spacing_expectation(const HazardModel& model, int m, int n, int k, int r,
                                  double u, double v) {
    if (k < 1 || r < 1) throw std::invalid_argument("spacing: k and r must be >= 1");
    if (n <= m) throw std::invalid_argument("spacing: requires n > m");
    const double upper_record = conditional_expectation(model, Window(n - m + k, r, u, v));
    const double lower_record = conditional_expectation(model, Window(k, n - m + r, u, v));
    return upper_record - lower_record;
}

/// E[ aN * R_n + aM * R_m | R_{m-k} = u, R_{n+r} = v ] by linearity.
inline double linear_combo_expectation(const HazardModel& model, double a_n, double a_m,
                                       int m, int n, int k, int r, double u, double v) {
    if (k < 1 || r < 1) throw std::invalid_argument("linear combo: k and r must be >= 1");
    if (n <= m) throw std::invalid_argument("linear combo: requires n > m");
    const double upper_record = conditional_expectation(model, Window(n - m + k, r, u, v));
    const double lower_record = conditional_expectation(model, Window(k, n - m + r, u, v));
    return a_n * upper_record + a_m * lower_record;
}

enum class Lemma3Mode { Closed, Quad };

/// I = int_a^b [(y-a)^j (b-y)^i - (y-a)^i (b-y)^j] y^2 dy
///   = i! j! (j-i) / (i+j+2)! * (b-a)^{i+j+1} (b^2 - a^2)
///
/// Closed mode evaluates the right side in log space; quad mode integrates
/// the left side. The two agree to relative 1e-10.
inline double lemma3_integral(int i, int j, double a, double b, Lemma3Mode mode) {
    if (i < 0 || j < 0 || i > 60 || j > 60)
        throw std::invalid_argument("lemma3: i and j must lie in [0, 60]");
    if (!(a < b)) throw std::invalid_argument("lemma3: requires a < b");
    if (mode == Lemma3Mode::Closed) {
        if (i == j) return 0.0;
        const double log_mag = std::lgamma(double(i + 1)) + std::lgamma(double(j + 1)) -
                               std::lgamma(double(i + j + 3)) + (i + j + 1) * std::log(b - a);
        return double(j - i) * (b * b - a * a) * std::exp(log_mag);
    }
    auto ipow = [](double base, int e) {
        double acc = 1.0;
        for (int t = 0; t < e; ++t) acc *= base;
        return acc;
    };
    return integrate(
        [&](double y) {
            return (ipow(y - a, j) * ipow(b - y, i) - ipow(y - a, i) * ipow(b - y, j)) * y * y;
        },
        a, b);
}

/// Wraps a polynomial as an integrand for conditional_expectation.
inline std::function<double(double)> poly_integrand(const PolyRational& p) {
    return [p](double x) { return p.eval(x); };
}

} // namespace reclab

#endif // RECLAB_CONDITIONAL_HPP
