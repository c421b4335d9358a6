#ifndef RECLAB_POLYNOMIAL_HPP
#define RECLAB_POLYNOMIAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace reclab {

/// Exact rational scalar used for all polynomial coefficients. Arithmetic
/// never rounds, so polynomial identities can be asserted as exact zeros.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational_factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Univariate polynomial with exact rational coefficients, coeffs[p] * x^p.
class PolyRational {
public:
    static constexpr int max_degree = 64;

    PolyRational() = default;

    explicit PolyRational(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        normalize();
        if (degree() > max_degree)
            throw std::invalid_argument("polynomial degree exceeds cap of 64");
    }

    static PolyRational monomial(int power, Rational coefficient) {
        if (power < 0 || power > max_degree)
            throw std::invalid_argument("monomial power out of range [0, 64]");
        std::vector<Rational> c(static_cast<std::size_t>(power) + 1);
        c.back() = std::move(coefficient);
        return PolyRational(std::move(c));
    }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coeff(int power) const {
        if (power < 0 || power >= static_cast<int>(coeffs_.size())) return Rational(0);
        return coeffs_[static_cast<std::size_t>(power)];
    }

    PolyRational derivative() const {
        if (coeffs_.size() <= 1) return PolyRational();
        std::vector<Rational> d(coeffs_.size() - 1);
        for (std::size_t p = 1; p < coeffs_.size(); ++p)
            d[p - 1] = coeffs_[p] * static_cast<int>(p);
        return PolyRational(std::move(d));
    }

    PolyRational derivative(int times) const {
        PolyRational d = *this;
        for (int t = 0; t < times; ++t) d = d.derivative();
        return d;
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double eval(double x) const {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * x + it->convert_to<double>();
        return acc;
    }

    const std::vector<Rational>& coeffs() const { return coeffs_; }

    friend bool operator==(const PolyRational& a, const PolyRational& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// h(x) = x^p / p!, the monomial family every worked identity uses.
inline PolyRational monomial_h(int p) {
    if (p < 1 || p > PolyRational::max_degree)
        throw std::invalid_argument("monomial_h: p must lie in [1, 64]");
    return PolyRational::monomial(p, Rational(1) / rational_factorial(p));
}

/// Parses the shared polynomial literal syntax:
///   poly:c0,c1,...   coefficients, rational literals a/b allowed
///   mono:p           monomial_h(p) = x^p / p!
inline PolyRational parse_poly(const std::string& literal) {
    auto parse_rational = [&](const std::string& tok) -> Rational {
        try {
            if (tok.find('/') != std::string::npos) return Rational(tok);
            if (tok.find('.') != std::string::npos || tok.find('e') != std::string::npos ||
                tok.find('E') != std::string::npos)
                throw std::invalid_argument("decimal");
            return Rational(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed poly literal '" + literal +
                                        "': coefficient '" + tok + "' is not an integer or a/b");
        }
    };

    if (literal.rfind("mono:", 0) == 0) {
        const std::string ptok = literal.substr(5);
        std::size_t used = 0;
        int p = 0;
        try {
            p = std::stoi(ptok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed poly literal '" + literal + "'");
        }
        if (used != ptok.size())
            throw std::invalid_argument("malformed poly literal '" + literal + "'");
        return monomial_h(p);
    }
    if (literal.rfind("poly:", 0) == 0) {
        std::vector<Rational> coeffs;
        std::string rest = literal.substr(5);
        std::size_t start = 0;
        while (start <= rest.size()) {
            auto comma = rest.find(',', start);
            const std::string tok =
                rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (tok.empty())
                throw std::invalid_argument("malformed poly literal '" + literal + "'");
            coeffs.push_back(parse_rational(tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return PolyRational(std::move(coeffs));
    }
    throw std::invalid_argument("malformed poly literal '" + literal +
                                "': expected poly:... or mono:p");
}

/// Bivariate polynomial in (u, v) with exact rational coefficients, stored
/// sparsely as (power of u, power of v) -> coefficient.
class BivariatePolyRational {
public:
    using Key = std::pair<int, int>;

    BivariatePolyRational() = default;

    void add_term(int pu, int pv, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(Key{pu, pv}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }

    Rational coeff(int pu, int pv) const {
        auto it = terms_.find(Key{pu, pv});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }

    BivariatePolyRational operator+(const BivariatePolyRational& o) const {
        BivariatePolyRational out = *this;
        for (const auto& [k, c] : o.terms_) out.add_term(k.first, k.second, c);
        return out;
    }

    BivariatePolyRational operator-(const BivariatePolyRational& o) const {
        BivariatePolyRational out = *this;
        for (const auto& [k, c] : o.terms_) out.add_term(k.first, k.second, -c);
        return out;
    }

    BivariatePolyRational operator*(const BivariatePolyRational& o) const {
        BivariatePolyRational out;
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_)
                out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return out;
    }

    BivariatePolyRational scaled(const Rational& s) const {
        BivariatePolyRational out;
        if (s == 0) return out;
        for (const auto& [k, c] : terms_) out.terms_.emplace(k, c * s);
        return out;
    }

    /// The polynomial with u and v exchanged.
    BivariatePolyRational swap_uv() const {
        BivariatePolyRational out;
        for (const auto& [k, c] : terms_) out.terms_.emplace(Key{k.second, k.first}, c);
        return out;
    }

    Rational eval(const Rational& u, const Rational& v) const {
        Rational acc = 0;
        for (const auto& [k, c] : terms_) {
            Rational term = c;
            for (int i = 0; i < k.first; ++i) term *= u;
            for (int i = 0; i < k.second; ++i) term *= v;
            acc += term;
        }
        return acc;
    }

    /// Floating-point evaluation, Horner in v inside Horner in u.
    double eval(double u, double v) const {
        if (terms_.empty()) return 0.0;
        int max_u = 0, max_v = 0;
        for (const auto& [k, c] : terms_) {
            if (k.first > max_u) max_u = k.first;
            if (k.second > max_v) max_v = k.second;
        }
        std::vector<std::vector<double>> dense(
            static_cast<std::size_t>(max_u) + 1,
            std::vector<double>(static_cast<std::size_t>(max_v) + 1, 0.0));
        for (const auto& [k, c] : terms_)
            dense[static_cast<std::size_t>(k.first)][static_cast<std::size_t>(k.second)] =
                c.convert_to<double>();
        double acc = 0.0;
        for (int pu = max_u; pu >= 0; --pu) {
            const auto& row = dense[static_cast<std::size_t>(pu)];
            double inner = 0.0;
            for (int pv = max_v; pv >= 0; --pv) inner = inner * v + row[static_cast<std::size_t>(pv)];
            acc = acc * u + inner;
        }
        return acc;
    }

    friend bool operator==(const BivariatePolyRational& a, const BivariatePolyRational& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::map<Key, Rational> terms_;
};

/// M(u, v) = (h(v) - h(u)) / (v - u) as an exact bivariate polynomial.
///
/// (v - u) divides h(v) - h(u) term by term:
///   (v^p - u^p) / (v - u) = sum_{a+b=p-1} u^a v^b,
/// so no polynomial division is ever performed.
inline BivariatePolyRational divided_difference(const PolyRational& h) {
    BivariatePolyRational m;
    for (int p = 1; p <= h.degree(); ++p) {
        const Rational c = h.coeff(p);
        if (c == 0) continue;
        for (int a = 0; a <= p - 1; ++a) m.add_term(a, p - 1 - a, c);
    }
    return m;
}

/// d^{i+j} M / du^i dv^j, exact.
inline BivariatePolyRational mixed_partial(const BivariatePolyRational& m, int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("mixed_partial: orders must be nonnegative");
    BivariatePolyRational out;
    for (const auto& [k, c] : m.terms()) {
        const int pu = k.first, pv = k.second;
        if (pu < i || pv < j) continue;
        Rational f = c;
        for (int t = 0; t < i; ++t) f *= (pu - t);
        for (int t = 0; t < j; ++t) f *= (pv - t);
        out.add_term(pu - i, pv - j, f);
    }
    return out;
}

/// M'(u, v) = (h'(v) - h'(u)) / (v - u), the divided difference of h'.
inline BivariatePolyRational dd_of_derivative(const PolyRational& h) {
    if (h.degree() < 1) throw std::invalid_argument("dd_of_derivative: deg h must be >= 1");
    return divided_difference(h.derivative());
}

inline double eval_M(const BivariatePolyRational& m, double u, double v) {
    return m.eval(u, v);
}

} // namespace reclab

#endif // RECLAB_POLYNOMIAL_HPP
