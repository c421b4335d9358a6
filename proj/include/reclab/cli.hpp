#ifndef RECLAB_CLI_HPP
#define RECLAB_CLI_HPP

#include "reclab/conditional.hpp"
#include "reclab/errors.hpp"
#include "reclab/hazard.hpp"
#include "reclab/identities.hpp"
#include "reclab/report_io.hpp"
#include "reclab/sampling.hpp"
#include "reclab/selftest.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace reclab::cli {

namespace detail {

inline std::uint64_t resolve_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (std::uint64_t(rd()) << 32) ^ rd();
    }
    try {
        std::size_t used = 0;
        const std::uint64_t seed = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return seed;
    } catch (const std::exception&) {
        throw std::invalid_argument("--seed expects a nonnegative integer or 'random'");
    }
}

inline GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.count, &trailing) != 3)
        throw std::invalid_argument("--grid expects lo:hi:count");
    return g;
}

inline std::function<double(double)> parse_integrand(const std::string& text) {
    if (text == "id") return [](double x) { return x; };
    return poly_integrand(parse_poly(text));
}

inline Method parse_method(const std::string& text) {
    if (text == "quad") return Method::Quad;
    if (text == "mc") return Method::Mc;
    throw std::invalid_argument("--method expects quad or mc");
}

inline ReportFormat parse_format(const std::string& text) {
    if (text == "csv") return ReportFormat::Csv;
    if (text == "json") return ReportFormat::Json;
    throw std::invalid_argument("--format expects csv or json");
}

inline void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    file << content;
}

inline std::string fmt_value(double x) { return format_double(x) + "\n"; }

} // namespace detail

/// Command-line front end. Exit codes: 0 success, 1 when --expect was given
/// and the verdict did not match, 2 usage errors, 3 numerical failure.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"reclab: conditional moments, samplers, and regression-identity scans "
                 "for record values"};
    app.require_subcommand(1);

    std::string dist, seed_text = "0", out_path, format_text = "csv";
    std::string g_text = "id", method_text = "quad", sim_method_text = "arrival";
    std::string grid_text, expect_text, identity_text;
    int opt_i = 1, opt_j = 1, opt_k = 0, opt_r = 0, opt_m = 0, opt_n = 0, opt_p = 0;
    int records = 5;
    double u = 0.0, v = 0.0, tol = 1e-6;
    long long samples = 200'000;

    auto* expect_cmd = app.add_subcommand("expect", "conditional expectation of one record");
    expect_cmd->add_option("--dist", dist)->required();
    expect_cmd->add_option("--i", opt_i);
    expect_cmd->add_option("--j", opt_j);
    expect_cmd->add_option("--u", u)->required();
    expect_cmd->add_option("--v", v)->required();
    expect_cmd->add_option("--g", g_text);
    expect_cmd->add_option("--method", method_text);
    expect_cmd->add_option("--samples", samples);
    expect_cmd->add_option("--seed", seed_text);
    expect_cmd->add_option("--out", out_path);

    auto* spacing_cmd = app.add_subcommand("spacing", "conditional expectation of a spacing");
    spacing_cmd->add_option("--dist", dist)->required();
    spacing_cmd->add_option("--m", opt_m)->required();
    spacing_cmd->add_option("--n", opt_n)->required();
    spacing_cmd->add_option("--k", opt_k);
    spacing_cmd->add_option("--r", opt_r);
    spacing_cmd->add_option("--u", u)->required();
    spacing_cmd->add_option("--v", v)->required();
    spacing_cmd->add_option("--method", method_text);
    spacing_cmd->add_option("--samples", samples);
    spacing_cmd->add_option("--seed", seed_text);
    spacing_cmd->add_option("--out", out_path);

    auto* simulate_cmd = app.add_subcommand("simulate", "sample record paths as CSV");
    simulate_cmd->add_option("--dist", dist)->required();
    simulate_cmd->add_option("--records", records);
    simulate_cmd->add_option("--samples", samples);
    simulate_cmd->add_option("--method", sim_method_text);
    simulate_cmd->add_option("--seed", seed_text);
    simulate_cmd->add_option("--out", out_path);

    auto* verify_cmd = app.add_subcommand("verify", "scan one identity over a grid");
    verify_cmd->add_option("--identity", identity_text)->required();
    verify_cmd->add_option("--dist", dist)->required();
    verify_cmd->add_option("--k", opt_k);
    verify_cmd->add_option("--r", opt_r);
    verify_cmd->add_option("--m", opt_m);
    verify_cmd->add_option("--n", opt_n);
    verify_cmd->add_option("--p", opt_p);
    verify_cmd->add_option("--grid", grid_text);
    verify_cmd->add_option("--tol", tol);
    verify_cmd->add_option("--method", method_text);
    verify_cmd->add_option("--samples", samples);
    verify_cmd->add_option("--seed", seed_text);
    verify_cmd->add_option("--out", out_path);
    verify_cmd->add_option("--format", format_text);
    verify_cmd->add_option("--expect", expect_text);

    auto* classify_cmd = app.add_subcommand("classify", "decide exponential / Weibull-half / neither");
    classify_cmd->add_option("--dist", dist)->required();
    classify_cmd->add_option("--tol", tol);
    classify_cmd->add_option("--out", out_path);

    auto* errata_cmd = app.add_subcommand("errata", "printed-constant comparison sweep");
    errata_cmd->add_option("--dist", dist)->required();
    errata_cmd->add_option("--out", out_path);
    errata_cmd->add_option("--format", format_text);

    auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
    selftest_cmd->add_option("--seed", seed_text);
    selftest_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::uint64_t seed = detail::resolve_seed(seed_text);

        if (expect_cmd->parsed()) {
            const HazardModel model = parse_model(dist);
            const Window w(opt_i, opt_j, u, v);
            const auto g = detail::parse_integrand(g_text);
            std::cerr << "# reclab expect dist=" << model.spec_string() << " i=" << opt_i
                      << " j=" << opt_j << " u=" << format_double(u) << " v=" << format_double(v)
                      << " g=" << g_text << " method=" << method_text << " seed=" << seed << "\n";
            double value = 0.0;
            if (detail::parse_method(method_text) == Method::Quad) {
                value = conditional_expectation(model, w, g);
            } else {
                SimConfig cfg;
                cfg.seed = seed;
                cfg.samples = samples;
                value = mc_conditional_expectation(model, w, g, cfg).mean;
            }
            detail::write_output(out_path, detail::fmt_value(value));
            return 0;
        }

        if (spacing_cmd->parsed()) {
            const HazardModel model = parse_model(dist);
            const int k = opt_k ? opt_k : 1, r = opt_r ? opt_r : 1;
            std::cerr << "# reclab spacing dist=" << model.spec_string() << " m=" << opt_m
                      << " n=" << opt_n << " k=" << k << " r=" << r << " u=" << format_double(u)
                      << " v=" << format_double(v) << " method=" << method_text
                      << " seed=" << seed << "\n";
            double value = 0.0;
            if (detail::parse_method(method_text) == Method::Quad) {
                value = spacing_expectation(model, opt_m, opt_n, k, r, u, v);
            } else {
                SimConfig cfg;
                cfg.samples = samples;
                cfg.seed = mix64(seed, 0);
                const auto upper = mc_conditional_expectation(
                    model, Window(opt_n - opt_m + k, r, u, v), [](double x) { return x; }, cfg);
                cfg.seed = mix64(seed, 1);
                const auto lower = mc_conditional_expectation(
                    model, Window(k, opt_n - opt_m + r, u, v), [](double x) { return x; }, cfg);
                value = upper.mean - lower.mean;
            }
            detail::write_output(out_path, detail::fmt_value(value));
            return 0;
        }

        if (simulate_cmd->parsed()) {
            const HazardModel model = parse_model(dist);
            const bool naive = sim_method_text == "naive";
            if (!naive && sim_method_text != "arrival")
                throw std::invalid_argument("simulate: --method expects arrival or naive");
            std::cerr << "# reclab simulate dist=" << model.spec_string()
                      << " records=" << records << " samples=" << samples
                      << " method=" << (naive ? "naive" : "arrival") << " seed=" << seed << "\n";
            std::vector<RecordPath> paths;
            paths.reserve(static_cast<std::size_t>(samples));
            for (long long id = 0; id < samples; ++id) {
                if (naive)
                    paths.push_back(sample_records_naive_retrying(model, records,
                                                                  mix64(seed, std::uint64_t(id))));
                else
                    paths.push_back(sample_records(model, records, mix64(seed, std::uint64_t(id))));
            }
            std::ostringstream os;
            write_record_paths_csv(os, paths);
            detail::write_output(out_path, os.str());
            return 0;
        }

        if (verify_cmd->parsed()) {
            const HazardModel model = parse_model(dist);
            const IdentityId id = identity_from_token(identity_text);
            const Method method = detail::parse_method(method_text);
            const GridSpec grid =
                grid_text.empty() ? default_grid(model) : detail::parse_grid(grid_text);
            const ScanParams params{opt_k, opt_r, opt_m, opt_n, opt_p};
            const ScanReport report = scan(id, model, params, grid, tol, method, seed, samples);
            detail::write_output(out_path, serialize_report(report, detail::parse_format(format_text)));
            if (!expect_text.empty()) {
                if (expect_text != "confirmed" && expect_text != "violated")
                    throw std::invalid_argument("--expect expects confirmed or violated");
                const bool want_confirmed = expect_text == "confirmed";
                if ((report.verdict == Verdict::Confirmed) != want_confirmed) return 1;
            }
            return 0;
        }

        if (classify_cmd->parsed()) {
            const HazardModel model = parse_model(dist);
            std::cerr << "# reclab classify dist=" << model.spec_string()
                      << " tol=" << format_double(tol) << "\n";
            detail::write_output(out_path,
                                 std::string(family_class_token(classify(model, tol))) + "\n");
            return 0;
        }

        if (errata_cmd->parsed()) {
            const HazardModel model = parse_model(dist);
            const ErrataReport report = errata_report(model);
            detail::write_output(out_path,
                                 serialize_errata(report, detail::parse_format(format_text)));
            return 0;
        }

        if (selftest_cmd->parsed()) {
            std::ostringstream os;
            const int code = run_selftest(seed, os);
            detail::write_output(out_path, os.str());
            return code;
        }
    } catch (const quadrature_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const budget_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace reclab::cli

#endif // RECLAB_CLI_HPP
