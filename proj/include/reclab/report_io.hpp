#ifndef RECLAB_REPORT_IO_HPP
#define RECLAB_REPORT_IO_HPP

#include "reclab/identities.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>

namespace reclab {

enum class ReportFormat { Csv, Json };

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

} // namespace detail

/// CSV form of a scan report. A '#' comment line echoes the resolved
/// configuration; the data table has exactly the columns
/// identity,dist,k,r,m,n,p,u,s,t,v,lhs,rhs,rel_residual
/// with unused fields left blank. Numbers carry 17 significant digits.
inline std::string serialize_report_csv(const ScanReport& report) {
    std::ostringstream os;
    os << "# identity=" << identity_token(report.identity) << " dist=" << report.dist
       << " grid=" << report.grid_desc << " tol=" << format_double(report.tol)
       << " method=" << (report.method == Method::Quad ? "quad" : "mc") << " seed=" << report.seed
       << " verdict=" << (report.verdict == Verdict::Confirmed ? "CONFIRMED" : "VIOLATED")
       << " max_rel_residual=" << format_double(report.max_rel_residual) << "\n";
    os << "identity,dist,k,r,m,n,p,u,s,t,v,lhs,rhs,rel_residual\n";

    const ParamUse use = param_use(report.identity);
    const int ar = arity(report.identity);
    for (const PointRecord& rec : report.points) {
        os << identity_token(report.identity) << ',' << detail::csv_field(report.dist) << ',';
        os << (use.k ? std::to_string(report.k) : "") << ',';
        os << (use.r ? std::to_string(report.r) : "") << ',';
        os << (use.m ? std::to_string(report.m) : "") << ',';
        os << (use.n ? std::to_string(report.n) : "") << ',';
        os << (use.p ? std::to_string(report.p) : "") << ',';
        // slot columns u, s, t, v
        std::string u, s, t, v;
        if (ar == 2) {
            u = format_double(rec.point[0]);
            v = format_double(rec.point[1]);
        } else if (ar == 3) {
            u = format_double(rec.point[0]);
            s = format_double(rec.point[1]);
            v = format_double(rec.point[2]);
        } else {
            u = format_double(rec.point[0]);
            s = format_double(rec.point[1]);
            t = format_double(rec.point[2]);
            v = format_double(rec.point[3]);
        }
        os << u << ',' << s << ',' << t << ',' << v << ',';
        os << format_double(rec.lhs) << ',' << format_double(rec.rhs) << ','
           << format_double(rec.rel_residual) << '\n';
    }
    return os.str();
}

/// JSON mirror of ScanReport with a schema_version field.
inline nlohmann::json report_to_json(const ScanReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["identity"] = identity_token(report.identity);
    j["dist"] = report.dist;
    j["grid"] = report.grid_desc;
    j["k"] = report.k;
    j["r"] = report.r;
    j["m"] = report.m;
    j["n"] = report.n;
    j["p"] = report.p;
    j["tol"] = report.tol;
    j["method"] = report.method == Method::Quad ? "quad" : "mc";
    j["seed"] = report.seed;
    j["verdict"] = report.verdict == Verdict::Confirmed ? "CONFIRMED" : "VIOLATED";
    j["max_rel_residual"] = report.max_rel_residual;
    j["runtime_ms"] = report.runtime_ms;
    nlohmann::json points = nlohmann::json::array();
    for (const PointRecord& rec : report.points) {
        nlohmann::json p;
        p["point"] = rec.point;
        p["lhs"] = rec.lhs;
        p["rhs"] = rec.rhs;
        p["residual"] = rec.residual;
        p["rel_residual"] = rec.rel_residual;
        p["mc_sigma"] = rec.mc_sigma;
        points.push_back(std::move(p));
    }
    j["points"] = std::move(points);
    return j;
}

inline ScanReport report_from_json(const nlohmann::json& j) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("report json: unsupported schema_version");
    ScanReport report;
    report.identity = identity_from_token(j.at("identity").get<std::string>());
    report.dist = j.at("dist").get<std::string>();
    report.grid_desc = j.at("grid").get<std::string>();
    report.k = j.at("k").get<int>();
    report.r = j.at("r").get<int>();
    report.m = j.at("m").get<int>();
    report.n = j.at("n").get<int>();
    report.p = j.at("p").get<int>();
    report.tol = j.at("tol").get<double>();
    report.method = j.at("method").get<std::string>() == "quad" ? Method::Quad : Method::Mc;
    report.seed = j.at("seed").get<std::uint64_t>();
    report.verdict = j.at("verdict").get<std::string>() == "CONFIRMED" ? Verdict::Confirmed
                                                                       : Verdict::Violated;
    report.max_rel_residual = j.at("max_rel_residual").get<double>();
    report.runtime_ms = j.at("runtime_ms").get<double>();
    for (const auto& p : j.at("points")) {
        PointRecord rec;
        rec.point = p.at("point").get<std::vector<double>>();
        rec.lhs = p.at("lhs").get<double>();
        rec.rhs = p.at("rhs").get<double>();
        rec.residual = p.at("residual").get<double>();
        rec.rel_residual = p.at("rel_residual").get<double>();
        rec.mc_sigma = p.at("mc_sigma").get<double>();
        report.points.push_back(std::move(rec));
    }
    return report;
}

inline std::string serialize_report(const ScanReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) return serialize_report_csv(report);
    return report_to_json(report).dump(2) + "\n";
}

inline std::string serialize_errata_csv(const ErrataReport& report) {
    std::ostringstream os;
    os << "# errata dist=" << report.dist << " grid=" << report.grid_desc << "\n";
    os << "dist,k,r,m,n,d,computed,rel_spread,printed_spacing,printed_cor2,spacing_verdict,"
          "cor2_verdict\n";
    for (const ErrataCell& cell : report.cells) {
        os << detail::csv_field(report.dist) << ',' << cell.k << ',' << cell.r << ',' << cell.m
           << ',' << cell.n << ',' << cell.d << ',' << format_double(cell.computed_mean) << ','
           << format_double(cell.rel_spread) << ',' << format_double(cell.printed_spacing) << ','
           << (cell.has_cor2 ? format_double(cell.printed_cor2) : "") << ','
           << cell.spacing_verdict << ',' << cell.cor2_verdict << '\n';
    }
    return os.str();
}

inline std::string serialize_errata(const ErrataReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) return serialize_errata_csv(report);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["dist"] = report.dist;
    j["grid"] = report.grid_desc;
    nlohmann::json cells = nlohmann::json::array();
    for (const ErrataCell& cell : report.cells) {
        nlohmann::json c;
        c["k"] = cell.k;
        c["r"] = cell.r;
        c["m"] = cell.m;
        c["n"] = cell.n;
        c["d"] = cell.d;
        c["computed"] = cell.computed_mean;
        c["rel_spread"] = cell.rel_spread;
        c["printed_spacing"] = cell.printed_spacing;
        c["spacing_verdict"] = cell.spacing_verdict;
        if (cell.has_cor2) {
            c["printed_cor2"] = cell.printed_cor2;
            c["cor2_verdict"] = cell.cor2_verdict;
        }
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

} // namespace reclab

#endif // RECLAB_REPORT_IO_HPP
