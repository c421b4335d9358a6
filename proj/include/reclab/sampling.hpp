#ifndef RECLAB_SAMPLING_HPP
#define RECLAB_SAMPLING_HPP

#include "reclab/conditional.hpp"
#include "reclab/errors.hpp"
#include "reclab/hazard.hpp"
#include "reclab/rng.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace reclab {

/// One simulated sequence of record values R_1 < R_2 < ... (and, for the
/// naive sampler only, the iid indices at which each record occurred).
struct RecordPath {
    std::vector<double> values;
    std::vector<long long> record_times; // empty unless produced by the naive sampler
};

struct SimConfig {
    std::uint64_t seed = 0;
    long long samples = 1;
    long long max_iid_draws = 1'000'000;
};

struct EstimatorResult {
    double mean = 0.0;
    double std_error = 0.0;
    long long samples = 0;
};

/// Record path via the arrival representation: H(R_n) is the sum of n
/// independent unit exponentials, so R_n = H^{-1}(E_1 + ... + E_n).
inline RecordPath sample_records(const HazardModel& model, int nmax, std::uint64_t seed) {
    if (nmax < 1 || nmax > 30)
        throw std::invalid_argument("sample_records: nmax must lie in [1, 30]");
    SplitMix64 rng(seed);
    RecordPath path;
    path.values.reserve(static_cast<std::size_t>(nmax));
    double arrival = 0.0;
    for (int n = 0; n < nmax; ++n) {
        arrival += draw_exponential(rng);
        path.values.push_back(model.inverse(arrival));
    }
    return path;
}

/// Record path by definition: draw iid X ~ F by inversion and keep successive
/// maxima. Since X = H^{-1}(-log(1-U)) is increasing in U, running maxima are
/// tracked on the uniforms and only actual records are transformed.
inline RecordPath sample_records_naive(const HazardModel& model, int nmax, const SimConfig& cfg) {
    if (nmax < 1 || nmax > 8)
        throw std::invalid_argument("sample_records_naive: nmax must lie in [1, 8]");
    SplitMix64 rng(cfg.seed);
    RecordPath path;
    path.values.reserve(static_cast<std::size_t>(nmax));
    path.record_times.reserve(static_cast<std::size_t>(nmax));
    double max_u = -1.0;
    for (long long draw = 1; draw <= cfg.max_iid_draws; ++draw) {
        const double u = uniform01(rng);
        if (u > max_u) {
            max_u = u;
            path.values.push_back(model.inverse(-std::log1p(-u)));
            path.record_times.push_back(draw);
            if (static_cast<int>(path.values.size()) == nmax) return path;
        }
    }
    throw budget_error("naive sampler: iid-draw budget exhausted before reaching record " +
                       std::to_string(nmax));
}

/// One exact draw from the conditional law of the bracketed record:
/// B ~ Beta(i, j) mapped through H^{-1}(H_u + B * W_{u,v}). Always in (u, v).
inline double sample_conditional(const HazardModel& model, const Window& w, std::uint64_t seed) {
    w.require_in_support(model);
    SplitMix64 rng(seed);
    const double b = draw_beta(rng, w.gaps_below, w.gaps_above);
    const double h_u = hazard_from_left(model, w.lower);
    const double w_uv = model.hazard(w.upper) - h_u;
    return model.inverse(h_u + b * w_uv);
}

/// Monte Carlo estimate of E[g(R) | window]. Draw index d uses the derived
/// seed mix64(cfg.seed, d), so the result does not depend on evaluation
/// order; accumulation is Welford's.
inline EstimatorResult mc_conditional_expectation(const HazardModel& model, const Window& w,
                                                  const std::function<double(double)>& g,
                                                  const SimConfig& cfg) {
    if (cfg.samples < 100)
        throw std::invalid_argument("mc_conditional_expectation: needs at least 100 samples");
    double mean = 0.0, m2 = 0.0;
    for (long long d = 0; d < cfg.samples; ++d) {
        const double x = sample_conditional(model, w, mix64(cfg.seed, std::uint64_t(d)));
        const double value = g(x);
        const double delta = value - mean;
        mean += delta / double(d + 1);
        m2 += delta * (value - mean);
    }
    EstimatorResult out;
    out.mean = mean;
    out.samples = cfg.samples;
    const double variance = cfg.samples > 1 ? m2 / double(cfg.samples - 1) : 0.0;
    out.std_error = std::sqrt(std::max(0.0, variance) / double(cfg.samples));
    return out;
}

/// CSV emission of simulated paths: path_id,record_index,value[,record_time].
/// The record_time column appears only when every path carries record times.
inline void write_record_paths_csv(std::ostream& os, std::span<const RecordPath> paths) {
    bool with_times = !paths.empty();
    for (const RecordPath& p : paths)
        if (p.record_times.size() != p.values.size()) with_times = false;
    os << (with_times ? "path_id,record_index,value,record_time\n"
                      : "path_id,record_index,value\n");
    char buf[64];
    for (std::size_t id = 0; id < paths.size(); ++id) {
        const RecordPath& p = paths[id];
        for (std::size_t n = 0; n < p.values.size(); ++n) {
            std::snprintf(buf, sizeof buf, "%.17g", p.values[n]);
            os << id << ',' << (n + 1) << ',' << buf;
            if (with_times) os << ',' << p.record_times[n];
            os << '\n';
        }
    }
}

} // namespace reclab

#endif // RECLAB_SAMPLING_HPP
