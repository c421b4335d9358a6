#ifndef RECLAB_KS_TEST_HPP
#define RECLAB_KS_TEST_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace reclab {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

namespace detail {

// Complement of the Kolmogorov limit cdf: Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
inline double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * double(j) * double(j) * x * x);
        sum += sign * term;
        if (term < 1e-16 * std::max(1.0, sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace detail

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q((sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D), ne = n1 n2 / (n1 + n2).
inline KsResult ks_two_sample(std::span<const double> sample1, std::span<const double> sample2) {
    if (sample1.empty() || sample2.empty())
        throw std::invalid_argument("ks_two_sample: both samples must be nonempty");
    std::vector<double> a(sample1.begin(), sample1.end());
    std::vector<double> b(sample2.begin(), sample2.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double n1 = double(a.size()), n2 = double(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x1 = a[i], x2 = b[j];
        if (x1 <= x2) ++i;
        if (x2 <= x1) ++j;
        d = std::max(d, std::abs(double(i) / n1 - double(j) / n2));
    }

    const double ne = std::sqrt(n1 * n2 / (n1 + n2));
    KsResult out;
    out.statistic = d;
    out.p_value = detail::kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
    return out;
}

} // namespace reclab

#endif // RECLAB_KS_TEST_HPP
