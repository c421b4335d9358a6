#ifndef RECLAB_IDENTITIES_HPP
#define RECLAB_IDENTITIES_HPP

#include "reclab/conditional.hpp"
#include "reclab/hazard.hpp"
#include "reclab/polynomial.hpp"
#include "reclab/rng.hpp"
#include "reclab/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reclab {

/// Every regression identity in the registry. Pair identities condition on
/// (u, v); triple identities add an inner covariate s with u < s < v; the two
/// quadruple identities compare an outer frame (u, v) with an inner frame
/// (s, t).
enum class IdentityId {
    AdjMean,  // E[R | adjacent u, v] = (u + v) / 2
    Bap05,    // E[h'(R) | adjacent u, v] = M(u, v)
    Yab08,    // E[h^{(k)}(R) | u at k gaps, adjacent v] = k * M_{k-1}(u, v)
    Weights,  // E[R | u at k gaps, adjacent v] = (u + k v) / (k + 1)
    Weights2, // E[R | adjacent u, v at r gaps] = (r u + v) / (r + 1)
    NecYab,   // E[h^{(k+r-1)}(R) | u, v] = norm * (r-1)M(k-1)(u, v)
    Thm1,     // cross form of the two-frame h^{(k+r-1)} regression
    Cor1,     // cross form of the two-frame identity regression
    An,       // E[R_3 - R_2 | R_1 = u, R_4 = v] = (v - u) / 3
    Thm2,     // (d+2)(t-s) E_outer[spacing] = d (v-u) E_inner[spacing]
    Cor2,     // spacing with n = m + 1 against (k+r-1)/(k+r+1) (v-u)
    Cor3,     // adjacent-covariate spacing against (n-m)/(n-m+2) (v-u)
    SumSpec,  // boundary-spacing sum against 2 (v-u) / (n-m+2)
    Thm3,     // ((d+1)s - t) E_outer[combo] = d u E_inner[combo]
    Cor4,     // E[R_n - (n-m) R_m | ...] = E[R_m | ...] - (n-m) u
    Lemma1,   // (H_v - H_u)(H'_u + H'_v) = 2 H'_u H'_v (v - u)
};

enum class Method { Quad, Mc };
enum class Verdict { Confirmed, Violated };
enum class FamilyClass { Exponential, WeibullHalf, Neither };

inline const char* identity_token(IdentityId id) {
    switch (id) {
        case IdentityId::AdjMean: return "adj_mean";
        case IdentityId::Bap05: return "bap05";
        case IdentityId::Yab08: return "yab08";
        case IdentityId::Weights: return "weights";
        case IdentityId::Weights2: return "weights2";
        case IdentityId::NecYab: return "nec_yab";
        case IdentityId::Thm1: return "thm1";
        case IdentityId::Cor1: return "cor1";
        case IdentityId::An: return "an";
        case IdentityId::Thm2: return "thm2";
        case IdentityId::Cor2: return "cor2";
        case IdentityId::Cor3: return "cor3";
        case IdentityId::SumSpec: return "sumspec";
        case IdentityId::Thm3: return "thm3";
        case IdentityId::Cor4: return "cor4";
        case IdentityId::Lemma1: return "lemma1";
    }
    return "";
}

inline IdentityId identity_from_token(const std::string& token) {
    static const IdentityId all[] = {
        IdentityId::AdjMean, IdentityId::Bap05, IdentityId::Yab08,  IdentityId::Weights,
        IdentityId::Weights2, IdentityId::NecYab, IdentityId::Thm1,  IdentityId::Cor1,
        IdentityId::An,      IdentityId::Thm2,  IdentityId::Cor2,   IdentityId::Cor3,
        IdentityId::SumSpec, IdentityId::Thm3,  IdentityId::Cor4,   IdentityId::Lemma1};
    for (IdentityId id : all)
        if (token == identity_token(id)) return id;
    throw std::invalid_argument("unknown identity token '" + token + "'");
}

inline int arity(IdentityId id) {
    switch (id) {
        case IdentityId::Thm1:
        case IdentityId::Cor1: return 3;
        case IdentityId::Thm2:
        case IdentityId::Thm3: return 4;
        default: return 2;
    }
}

/// Which integer parameters an identity actually consumes (drives the blank
/// columns of the CSV report).
struct ParamUse {
    bool k = false, r = false, m = false, n = false, p = false;
};

inline ParamUse param_use(IdentityId id) {
    switch (id) {
        case IdentityId::AdjMean: return {};
        case IdentityId::Bap05: return {.p = true};
        case IdentityId::Yab08: return {.k = true, .p = true};
        case IdentityId::Weights: return {.k = true};
        case IdentityId::Weights2: return {.r = true};
        case IdentityId::NecYab: return {.k = true, .r = true, .p = true};
        case IdentityId::Thm1: return {.k = true, .r = true, .p = true};
        case IdentityId::Cor1: return {.k = true, .r = true};
        case IdentityId::An: return {};
        case IdentityId::Thm2: return {.k = true, .r = true, .m = true, .n = true};
        case IdentityId::Cor2: return {.k = true, .r = true, .m = true, .n = true};
        case IdentityId::Cor3: return {.m = true, .n = true};
        case IdentityId::SumSpec: return {.m = true, .n = true};
        case IdentityId::Thm3: return {.k = true, .r = true, .m = true, .n = true};
        case IdentityId::Cor4: return {.m = true, .n = true};
        case IdentityId::Lemma1: return {};
    }
    return {};
}

/// One identity instance: integer parameters plus an evaluation point.
/// The point is stored in named-slot order, (u, v), (u, s, v) or (u, s, t, v);
/// the required ordering of the values is the identity's own (Thm3 admits
/// both s < u < v < t and u < s < t < v).
struct IdentityCase {
    IdentityId id = IdentityId::AdjMean;
    int k = 1, r = 1, m = 2, n = 3, p = 0; // p = 0 means the default degree k + r
    std::vector<double> point;
};

struct ResidualValue {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_residual = 0.0;
    double mc_sigma = 0.0; // propagated standard error of lhs - rhs (Mc only)
};

namespace detail {

// Value with propagated variance; coefficients are deterministic, so the
// identities only ever need scaling and sums of independent estimates.
struct Est {
    double value = 0.0;
    double var = 0.0;
};

inline Est operator*(double c, const Est& e) { return {c * e.value, c * c * e.var}; }
inline Est operator+(const Est& a, const Est& b) { return {a.value + b.value, a.var + b.var}; }
inline Est operator-(const Est& a, const Est& b) { return {a.value - b.value, a.var + b.var}; }
inline Est est_const(double v) { return {v, 0.0}; }

inline double exact_factorial_ratio(int num, int den1, int den2) {
    // num! / (den1! den2!) for the small integer parameters of the registry.
    double acc = 1.0;
    for (int t = 2; t <= num; ++t) acc *= t;
    for (int t = 2; t <= den1; ++t) acc /= t;
    for (int t = 2; t <= den2; ++t) acc /= t;
    return acc;
}

class ExpectationEngine {
public:
    ExpectationEngine(const HazardModel& model, Method method, std::uint64_t seed,
                      long long samples)
        : model_(model), method_(method), seed_(seed), samples_(samples) {}

    Est expect(const Window& w, const std::function<double(double)>& g) {
        if (method_ == Method::Quad) return {conditional_expectation(model_, w, g), 0.0};
        SimConfig cfg;
        cfg.seed = mix64(seed_, counter_++);
        cfg.samples = samples_;
        const EstimatorResult res = mc_conditional_expectation(model_, w, g, cfg);
        return {res.mean, res.std_error * res.std_error};
    }

    Est expect_identity(const Window& w) {
        return expect(w, [](double x) { return x; });
    }

    /// Record expectation that tolerates a zero gap count: a record zero gaps
    /// away from a covariate IS that covariate, so the expectation collapses
    /// to the conditioning value.
    Est record_value(int below, int above, double lo, double hi) {
        if (below == 0) return est_const(lo);
        if (above == 0) return est_const(hi);
        return expect_identity(Window(below, above, lo, hi));
    }

    /// E[R_n - R_m] between covariates (lo, hi) sitting kk gaps below R_m and
    /// rr gaps above R_n, with delta = n - m.
    Est spacing(int delta, int kk, int rr, double lo, double hi) {
        return record_value(delta + kk, rr, lo, hi) - record_value(kk, delta + rr, lo, hi);
    }

    /// a_n E[R_n] + a_m E[R_m] in the same frame as spacing().
    Est combo(int delta, int kk, int rr, double a_n, double a_m, double lo, double hi) {
        return a_n * record_value(delta + kk, rr, lo, hi) +
               a_m * record_value(kk, delta + rr, lo, hi);
    }

    const HazardModel& model() const { return model_; }

private:
    const HazardModel& model_;
    Method method_;
    std::uint64_t seed_;
    long long samples_;
    std::uint64_t counter_ = 0;
};

inline void require_point_ordering(const IdentityCase& c) {
    const auto& pt = c.point;
    if (static_cast<int>(pt.size()) != arity(c.id))
        throw std::invalid_argument("identity point has wrong arity");
    auto ascending = [](std::initializer_list<double> xs) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double x : xs) {
            if (!(x > prev)) return false;
            prev = x;
        }
        return true;
    };
    bool ok = false;
    switch (arity(c.id)) {
        case 2: ok = ascending({pt[0], pt[1]}); break;
        case 3: ok = ascending({pt[0], pt[1], pt[2]}); break;
        case 4: {
            const double u = pt[0], s = pt[1], t = pt[2], v = pt[3];
            if (c.id == IdentityId::Thm2) ok = ascending({u, s, t, v});
            else ok = ascending({s, u, v, t}) || ascending({u, s, t, v});
            break;
        }
    }
    if (!ok) throw std::invalid_argument("identity point violates the required ordering");
}

inline IdentityCase resolve_case(const IdentityCase& raw) {
    IdentityCase c = raw;
    if (c.id == IdentityId::An) {
        c.k = 1; c.r = 1; c.m = 2; c.n = 3;
    }
    if (c.k < 1 || c.r < 1) throw std::invalid_argument("identity parameters: k, r must be >= 1");
    if ((c.id == IdentityId::Thm1 || c.id == IdentityId::Cor1) && c.k < 2)
        throw std::invalid_argument(std::string(identity_token(c.id)) + " requires k >= 2");
    const ParamUse use = param_use(c.id);
    if (use.m || use.n) {
        if (c.m < 2) throw std::invalid_argument("identity parameters: m must be >= 2");
        if (c.id == IdentityId::Cor2) {
            if (raw.n != 0 && raw.n != c.m + 1)
                throw std::invalid_argument("cor2 fixes n = m + 1");
            c.n = c.m + 1;
        } else if (c.n < c.m + 1) {
            throw std::invalid_argument("identity parameters: n must be >= m + 1");
        }
    }
    if (use.p) {
        if (c.p == 0) c.p = c.k + c.r;
        if (c.p < c.k + c.r - 1)
            throw std::invalid_argument("polynomial degree p must be >= k + r - 1");
        if (c.p > PolyRational::max_degree)
            throw std::invalid_argument("polynomial degree p exceeds 64");
    } else {
        c.p = 0;
    }
    return c;
}

} // namespace detail

/// Evaluates one identity case as cross-multiplied (division-free) lhs and
/// rhs with rel_residual = |lhs - rhs| / max(|lhs|, |rhs|, 1e-12). For the
/// Mc method, per-expectation seeds derive from `seed` and mc_sigma carries
/// the propagated standard error of lhs - rhs.
inline ResidualValue residual(const IdentityCase& raw, const HazardModel& model, Method method,
                              std::uint64_t seed = 0, long long mc_samples = 200000) {
    using detail::Est;
    using detail::est_const;
    const IdentityCase c = detail::resolve_case(raw);
    detail::require_point_ordering(c);
    detail::ExpectationEngine eng(model, method, seed, mc_samples);

    const auto& pt = c.point;
    Est lhs, rhs;
    switch (c.id) {
        case IdentityId::AdjMean: {
            const double u = pt[0], v = pt[1];
            lhs = eng.expect_identity(Window(1, 1, u, v));
            rhs = est_const(0.5 * (u + v));
            break;
        }
        case IdentityId::Bap05: {
            const double u = pt[0], v = pt[1];
            const PolyRational h = monomial_h(c.p ? c.p : 2);
            lhs = eng.expect(Window(1, 1, u, v), poly_integrand(h.derivative()));
            rhs = est_const(divided_difference(h).eval(u, v));
            break;
        }
        case IdentityId::Yab08: {
            const double u = pt[0], v = pt[1];
            const PolyRational h = monomial_h(c.p);
            lhs = eng.expect(Window(c.k, 1, u, v), poly_integrand(h.derivative(c.k)));
            rhs = est_const(c.k * mixed_partial(divided_difference(h), 0, c.k - 1).eval(u, v));
            break;
        }
        case IdentityId::Weights: {
            const double u = pt[0], v = pt[1];
            lhs = eng.expect_identity(Window(c.k, 1, u, v));
            rhs = est_const((u + c.k * v) / double(c.k + 1));
            break;
        }
        case IdentityId::Weights2: {
            const double u = pt[0], v = pt[1];
            lhs = eng.expect_identity(Window(1, c.r, u, v));
            rhs = est_const((c.r * u + v) / double(c.r + 1));
            break;
        }
        case IdentityId::NecYab: {
            const double u = pt[0], v = pt[1];
            const PolyRational h = monomial_h(c.p);
            const double norm = detail::exact_factorial_ratio(c.k + c.r - 1, c.k - 1, c.r - 1);
            lhs = eng.expect(Window(c.k, c.r, u, v), poly_integrand(h.derivative(c.k + c.r - 1)));
            rhs = est_const(
                norm * mixed_partial(divided_difference(h), c.r - 1, c.k - 1).eval(u, v));
            break;
        }
        case IdentityId::Thm1: {
            const double u = pt[0], s = pt[1], v = pt[2];
            const PolyRational h = monomial_h(c.p);
            const auto g = poly_integrand(h.derivative(c.k + c.r - 1));
            const double m_prime =
                mixed_partial(dd_of_derivative(h), c.r - 1, c.k - 2).eval(s, v);
            const double m_plain =
                mixed_partial(divided_difference(h), c.r - 1, c.k - 1).eval(u, v);
            const Est outer = eng.expect(Window(c.k, c.r, u, v), g);
            const Est inner = eng.expect(Window(c.k - 1, c.r, s, v), g);
            lhs = ((c.k - 1) * m_prime) * outer;
            rhs = ((c.k + c.r - 1) * m_plain) * inner;
            break;
        }
        case IdentityId::Cor1: {
            const double u = pt[0], s = pt[1], v = pt[2];
            const Est outer = eng.expect_identity(Window(c.k, c.r, u, v));
            const Est inner = eng.expect_identity(Window(c.k - 1, c.r, s, v));
            lhs = (double(c.k + c.r) * (c.r * s + (c.k - 1) * v)) * outer;
            rhs = (double(c.k + c.r - 1) * (c.r * u + c.k * v)) * inner;
            break;
        }
        case IdentityId::An: {
            const double u = pt[0], v = pt[1];
            lhs = eng.spacing(1, 1, 1, u, v);
            rhs = est_const((v - u) / 3.0);
            break;
        }
        case IdentityId::Thm2: {
            const double u = pt[0], s = pt[1], t = pt[2], v = pt[3];
            const int delta = c.n - c.m;
            const int d = delta + c.k + c.r - 2;
            const Est outer = eng.spacing(delta, c.k, c.r, u, v);
            const Est inner = eng.spacing(delta, c.k - 1, c.r - 1, s, t);
            lhs = ((d + 2) * (t - s)) * outer;
            rhs = (double(d) * (v - u)) * inner;
            break;
        }
        case IdentityId::Cor2: {
            const double u = pt[0], v = pt[1];
            lhs = eng.spacing(1, c.k, c.r, u, v);
            rhs = est_const((v - u) * double(c.k + c.r - 1) / double(c.k + c.r + 1));
            break;
        }
        case IdentityId::Cor3: {
            const double u = pt[0], v = pt[1];
            const int delta = c.n - c.m;
            lhs = eng.spacing(delta, 1, 1, u, v);
            rhs = est_const((v - u) * double(delta) / double(delta + 2));
            break;
        }
        case IdentityId::SumSpec: {
            const double u = pt[0], v = pt[1];
            const int delta = c.n - c.m;
            const Est lower_record = eng.expect_identity(Window(1, delta + 1, u, v));
            const Est upper_record = eng.expect_identity(Window(delta + 1, 1, u, v));
            lhs = lower_record - upper_record + est_const(v - u);
            rhs = est_const(2.0 * (v - u) / double(delta + 2));
            break;
        }
        case IdentityId::Thm3: {
            const double u = pt[0], s = pt[1], t = pt[2], v = pt[3];
            const int delta = c.n - c.m;
            const int d = delta + c.k + c.r - 2;
            const double a_n = double(c.k);
            const double a_m = -double(delta + c.k);
            const Est outer = eng.combo(delta, c.k, c.r, a_n, a_m, u, v);
            const Est inner = eng.combo(delta, c.k - 1, c.r - 1, a_n, a_m, s, t);
            lhs = ((d + 1) * s - t) * outer;
            rhs = (double(d) * u) * inner;
            break;
        }
        case IdentityId::Cor4: {
            const double u = pt[0], v = pt[1];
            const int delta = c.n - c.m;
            const Est upper_record = eng.expect_identity(Window(delta + 1, 1, u, v));
            const Est lower_record = eng.expect_identity(Window(1, delta + 1, u, v));
            lhs = upper_record - double(delta) * lower_record;
            rhs = lower_record + est_const(-double(delta) * u);
            break;
        }
        case IdentityId::Lemma1: {
            const double u = pt[0], v = pt[1];
            const double hu = model.hazard(u), hv = model.hazard(v);
            const double ru = model.rate(u), rv = model.rate(v);
            lhs = est_const((hv - hu) * (ru + rv));
            rhs = est_const(2.0 * ru * rv * (v - u));
            break;
        }
    }

    ResidualValue out;
    out.lhs = lhs.value;
    out.rhs = rhs.value;
    out.rel_residual = std::abs(lhs.value - rhs.value) /
                       std::max({std::abs(lhs.value), std::abs(rhs.value), 1e-12});
    out.mc_sigma = std::sqrt(lhs.var + rhs.var);
    return out;
}

/// Base-point grid: `count` points whose offsets above the model's left
/// endpoint are geometrically spaced between (lo - l_F) and (hi - l_F).
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

inline GridSpec default_grid(const HazardModel& model) {
    return {model.left_endpoint() + 0.25, model.left_endpoint() + 8.0, 6};
}

inline std::vector<double> grid_points(const GridSpec& grid, const HazardModel& model) {
    const double lf = model.left_endpoint();
    if (!(grid.lo > lf) || !(grid.hi > grid.lo) || grid.count < 2)
        throw std::invalid_argument("grid: requires l_F < lo < hi and count >= 2");
    const double d_lo = grid.lo - lf, d_hi = grid.hi - lf;
    std::vector<double> pts(static_cast<std::size_t>(grid.count));
    for (int i = 0; i < grid.count; ++i)
        pts[static_cast<std::size_t>(i)] =
            lf + d_lo * std::pow(d_hi / d_lo, double(i) / double(grid.count - 1));
    return pts;
}

struct PointRecord {
    std::vector<double> point;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double rel_residual = 0.0;
    double mc_sigma = 0.0;
};

struct ScanReport {
    IdentityId identity = IdentityId::AdjMean;
    std::string dist;
    std::string grid_desc;
    int k = 1, r = 1, m = 2, n = 3, p = 0;
    std::vector<PointRecord> points;
    double max_rel_residual = 0.0;
    Verdict verdict = Verdict::Confirmed;
    double tol = 1e-6;
    Method method = Method::Quad;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

struct ScanParams {
    int k = 0, r = 0, m = 0, n = 0, p = 0; // 0 = identity default
};

namespace detail {

inline IdentityCase base_case(IdentityId id, const ScanParams& params) {
    IdentityCase c;
    c.id = id;
    c.k = params.k ? params.k : ((id == IdentityId::Thm1 || id == IdentityId::Cor1) ? 2 : 1);
    c.r = params.r ? params.r : 1;
    c.m = params.m ? params.m : 2;
    c.n = params.n; // 0 lets cor2 derive m + 1; others default below
    if (c.n == 0 && id != IdentityId::Cor2) c.n = c.m + 1;
    c.p = params.p;
    return resolve_case(c);
}

// Thm1 regularity: the (r-1, k)-order partial of M must not vanish at
// (l_F, v); points whose v fails this carry no information and are skipped.
inline bool thm1_condition_ii(const IdentityCase& c, const HazardModel& model, double v) {
    const BivariatePolyRational mk =
        mixed_partial(divided_difference(monomial_h(c.p)), c.r - 1, c.k);
    const double val = mk.eval(model.left_endpoint(), v);
    return std::abs(val) > 1e-12;
}

// Thm3 tuples with (d+1)s == t make both cross-multiplied sides vanish
// identically; they carry no signal and are excluded from scans.
inline bool thm3_degenerate(const IdentityCase& c, double s, double t) {
    const int d = (c.n - c.m) + c.k + c.r - 2;
    return std::abs((d + 1) * s - t) <= 1e-6 * std::max(1.0, std::abs(t));
}

template <class T>
void seeded_subsample(std::vector<T>& items, std::size_t keep, std::uint64_t seed) {
    if (items.size() <= keep) return;
    SplitMix64 rng(seed);
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        // unbiased bounded draw by rejection
        const std::uint64_t bound = i + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do { x = rng(); } while (x >= limit);
        std::swap(items[i], items[x % bound]);
    }
    items.resize(keep);
}

} // namespace detail

/// Evaluates an identity over every admissible ordered tuple drawn from the
/// grid's base points (subsampled to at most 15 with the run seed), fills a
/// ScanReport and renders the verdict. Deterministic for a fixed seed.
inline ScanReport scan(IdentityId id, const HazardModel& model, const ScanParams& params,
                       const GridSpec& grid, double tol, Method method, std::uint64_t seed,
                       long long mc_samples = 200000) {
    const auto t0 = std::chrono::steady_clock::now();
    const IdentityCase base = detail::base_case(id, params);
    const std::vector<double> pts = grid_points(grid, model);
    const int ar = arity(id);

    // All strictly increasing combinations of the base points.
    std::vector<std::vector<double>> tuples;
    std::vector<int> idx(static_cast<std::size_t>(ar));
    std::function<void(int, int)> combine = [&](int start, int depth) {
        if (depth == ar) {
            std::vector<double> tup(static_cast<std::size_t>(ar));
            for (int a = 0; a < ar; ++a) tup[size_t(a)] = pts[size_t(idx[size_t(a)])];
            tuples.push_back(std::move(tup));
            return;
        }
        for (int i = start; i < static_cast<int>(pts.size()); ++i) {
            idx[size_t(depth)] = i;
            combine(i + 1, depth + 1);
        }
    };
    combine(0, 0);

    // Map ascending tuples onto named slots and filter out degenerate points.
    std::vector<std::vector<double>> cases;
    for (const auto& tup : tuples) {
        if (ar == 2) {
            cases.push_back(tup);
        } else if (ar == 3) {
            if (id != IdentityId::Thm1 || detail::thm1_condition_ii(base, model, tup[2]))
                cases.push_back(tup); // (u, s, v)
        } else if (id == IdentityId::Thm2) {
            cases.push_back(tup); // (u, s, t, v)
        } else {
            // Thm3 admits both printed orderings; evaluate each assignment.
            std::vector<double> native = {tup[1], tup[0], tup[3], tup[2]}; // s < u < v < t
            if (!detail::thm3_degenerate(base, native[1], native[2])) cases.push_back(native);
            if (!detail::thm3_degenerate(base, tup[1], tup[2])) cases.push_back(tup);
        }
    }
    detail::seeded_subsample(cases, 15, seed);
    std::sort(cases.begin(), cases.end());
    if (cases.empty()) throw std::invalid_argument("scan: grid produced no admissible points");

    ScanReport report;
    report.identity = id;
    report.dist = model.spec_string();
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, "geometric:%.17g:%.17g:%d", grid.lo, grid.hi, grid.count);
        report.grid_desc = buf;
    }
    report.k = base.k;
    report.r = base.r;
    report.m = base.m;
    report.n = base.n;
    report.p = base.p;
    report.tol = tol;
    report.method = method;
    report.seed = seed;

    bool all_pass = true;
    for (std::size_t pi = 0; pi < cases.size(); ++pi) {
        IdentityCase c = base;
        c.point = cases[pi];
        const ResidualValue rv = residual(c, model, method, mix64(seed, pi), mc_samples);
        PointRecord rec;
        rec.point = cases[pi];
        rec.lhs = rv.lhs;
        rec.rhs = rv.rhs;
        rec.residual = rv.lhs - rv.rhs;
        rec.rel_residual = rv.rel_residual;
        rec.mc_sigma = rv.mc_sigma;
        report.max_rel_residual = std::max(report.max_rel_residual, rv.rel_residual);
        if (method == Method::Quad) {
            if (rv.rel_residual > tol) all_pass = false;
        } else {
            const double scale = std::max({std::abs(rv.lhs), std::abs(rv.rhs), 1.0});
            if (std::abs(rv.lhs - rv.rhs) > 4.0 * rv.mc_sigma + 1e-12 * scale) all_pass = false;
        }
        report.points.push_back(std::move(rec));
    }
    report.verdict = all_pass ? Verdict::Confirmed : Verdict::Violated;
    report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// Family classifier from the decision table: adjacent-covariate spacing
/// (cor3) and the hazard functional equation (lemma1) accept both
/// characterized families; thm3 then separates the exponential from
/// Weibull-half.
inline FamilyClass classify(const HazardModel& model, double tol = 1e-6) {
    const GridSpec grid = default_grid(model);
    auto confirmed = [&](IdentityId id, const ScanParams& params) {
        return scan(id, model, params, grid, tol, Method::Quad, 0).verdict == Verdict::Confirmed;
    };
    bool cor3_ok = true;
    for (int n : {3, 4, 5}) cor3_ok = cor3_ok && confirmed(IdentityId::Cor3, {.m = 2, .n = n});
    const bool lemma1_ok = confirmed(IdentityId::Lemma1, {});
    if (!(cor3_ok && lemma1_ok)) return FamilyClass::Neither;
    bool thm3_ok = true;
    for (int n : {3, 4})
        thm3_ok = thm3_ok && confirmed(IdentityId::Thm3, {.k = 1, .r = 1, .m = 2, .n = n});
    return thm3_ok ? FamilyClass::Exponential : FamilyClass::WeibullHalf;
}

inline const char* family_class_token(FamilyClass c) {
    switch (c) {
        case FamilyClass::Exponential: return "Exponential";
        case FamilyClass::WeibullHalf: return "WeibullHalf";
        case FamilyClass::Neither: return "Neither";
    }
    return "";
}

/// One cell of the errata sweep: the normalized spacing constant
/// (d+2)/(v-u) * E[R_n - R_m | ...] computed over the grid, against the two
/// printed constants it is supposed to equal.
struct ErrataCell {
    int k = 0, r = 0, m = 0, n = 0, d = 0;
    double computed_mean = 0.0;
    double rel_spread = 0.0; // (max - min) / max(1, |mean|) over the grid
    double printed_spacing = 0.0;   // 2 (n - m)
    bool has_cor2 = false;          // only when n = m + 1
    double printed_cor2 = 0.0;      // k + r - 1 in the same normalized units
    std::string spacing_verdict;    // MATCH / MISMATCH / NONCONSTANT
    std::string cor2_verdict;       // empty unless has_cor2
};

struct ErrataReport {
    std::string dist;
    std::string grid_desc;
    std::vector<ErrataCell> cells;
};

/// Tabulates the printed spacing constants against computed values for
/// k, r <= 3 and n - m <= 3, with a constancy check over the (u, v) grid.
/// Reports without asserting either side as ground truth.
inline ErrataReport errata_report(const HazardModel& model) {
    const bool exponential = model.family() == Family::Exponential;
    if (!exponential && !model.is_weibull_half())
        throw std::invalid_argument("errata report: model must be exponential or Weibull-half");

    const GridSpec grid = default_grid(model);
    const std::vector<double> pts = grid_points(grid, model);

    ErrataReport report;
    report.dist = model.spec_string();
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, "geometric:%.17g:%.17g:%d", grid.lo, grid.hi, grid.count);
        report.grid_desc = buf;
    }

    for (int delta = 1; delta <= 3; ++delta) {
        for (int k = 1; k <= 3; ++k) {
            for (int r = 1; r <= 3; ++r) {
                ErrataCell cell;
                cell.k = k;
                cell.r = r;
                cell.m = 2;
                cell.n = 2 + delta;
                cell.d = delta + k + r - 2;

                double sum = 0.0;
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                int count = 0;
                for (std::size_t a = 0; a < pts.size(); ++a) {
                    for (std::size_t b = a + 1; b < pts.size(); ++b) {
                        const double u = pts[a], v = pts[b];
                        const double value = (cell.d + 2) / (v - u) *
                                             spacing_expectation(model, cell.m, cell.n, k, r, u, v);
                        sum += value;
                        lo = std::min(lo, value);
                        hi = std::max(hi, value);
                        ++count;
                    }
                }
                cell.computed_mean = sum / count;
                cell.rel_spread = (hi - lo) / std::max(1.0, std::abs(cell.computed_mean));
                const bool constant = cell.rel_spread <= 1e-8;

                cell.printed_spacing = 2.0 * delta;
                auto verdict = [&](double printed) -> std::string {
                    if (!constant) return "NONCONSTANT";
                    return std::abs(cell.computed_mean - printed) <=
                                   1e-6 * std::max(1.0, std::abs(printed))
                               ? "MATCH"
                               : "MISMATCH";
                };
                cell.spacing_verdict = verdict(cell.printed_spacing);
                if (delta == 1) {
                    cell.has_cor2 = true;
                    cell.printed_cor2 = double(k + r - 1);
                    cell.cor2_verdict = verdict(cell.printed_cor2);
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

} // namespace reclab

#endif // RECLAB_IDENTITIES_HPP
