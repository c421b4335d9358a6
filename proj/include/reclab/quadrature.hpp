#ifndef RECLAB_QUADRATURE_HPP
#define RECLAB_QUADRATURE_HPP

#include "reclab/errors.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace reclab {

/// Gauss-Legendre nodes and weights on [0, 1], cached per node count.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendreRule compute_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_n from the Chebyshev-based initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        // Map from [-1, 1] to [0, 1]; weight 2/((1-z^2) pp^2) halves as well.
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + z);
        const double w = 1.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

} // namespace detail

inline const GaussLegendreRule& gauss_legendre(int n) {
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

/// Integrates f over (0, 1) by Gauss-Legendre with node doubling
/// 16 -> 32 -> ... -> 1024, stopping once two successive estimates agree to
/// max(1e-12, 1e-10 * |estimate|). Throws quadrature_error (carrying the two
/// last estimates) if 1024 nodes are reached without convergence.
template <class F>
double integrate01(F&& f) {
    double previous = 0.0;
    bool have_previous = false;
    for (int n = 16; n <= 1024; n *= 2) {
        const GaussLegendreRule& rule = gauss_legendre(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(rule.nodes[i]);
        if (have_previous &&
            std::abs(sum - previous) <= std::max(1e-12, 1e-10 * std::abs(sum)))
            return sum;
        previous = sum;
        have_previous = true;
    }
    const GaussLegendreRule& rule = gauss_legendre(1024);
    double last = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        last += rule.weights[i] * f(rule.nodes[i]);
    throw quadrature_error("quadrature did not converge at 1024 nodes", previous, last);
}

/// Same engine on a general interval (a, b).
template <class F>
double integrate(F&& f, double a, double b) {
    const double width = b - a;
    return width * integrate01([&](double t) { return f(a + t * width); });
}

namespace detail {

template <class F>
double adaptive_simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson integration over (a, b). Deliberately a different engine
/// from the Gauss-Legendre path so the two can cross-check each other.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace reclab

#endif // RECLAB_QUADRATURE_HPP
