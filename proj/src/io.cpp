#include "imcf/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

#include "imcf/errors.hpp"

namespace imcf::io {

namespace {

Json number_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "origin-series") return Provenance::OriginSeries;
    if (s == "picard") return Provenance::Picard;
    if (s == "integrator") return Provenance::Integrator;
    throw SchemaError("unknown segment provenance '" + s + "'");
}

RadialProfile build_profile(const Parameters& params, std::vector<ProfilePoint> pts,
                            std::vector<ProfileSegment> segs, const std::string& source) {
    if (pts.empty()) {
        throw SchemaError(source + ": no data rows");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!std::isfinite(p.r) || !std::isfinite(p.f) || !std::isfinite(p.fr) ||
            !std::isfinite(p.frr)) {
            throw SchemaError(source + ": non-finite value in row " + std::to_string(i + 1));
        }
    }
    if (pts.front().r != 0.0) {
        throw SchemaError(source + ": first radius must be 0");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i].r > pts[i - 1].r)) {
            throw SchemaError(source + ": radii not strictly increasing at row " +
                              std::to_string(i + 1));
        }
    }
    for (const auto& s : segs) {
        if (s.first > s.last || s.last >= pts.size()) {
            throw SchemaError(source + ": segment index out of range");
        }
    }
    try {
        return RadialProfile(validate(params), std::move(pts), std::move(segs));
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(source + ": " + e.what());
    }
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || first == last) {
        return std::nullopt;
    }
    return v;
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile) {
    os << kProfileHeader << '\n';
    for (const auto& p : profile.points()) {
        os << format_number(p.r) << ',' << format_number(p.f) << ',' << format_number(p.fr) << ','
           << format_number(p.frr) << ',' << format_number(p.w()) << ',';
        if (p.f > 0.0) {
            os << format_number(p.r * p.fr / p.f);
        }
        os << '\n';
    }
}

Json profile_to_json(const RadialProfile& profile) {
    Json j;
    j["params"] = to_json(profile.params());
    j["columns"] = Json::array({"r", "f", "fr", "frr", "w", "q"});
    Json rows = Json::array();
    for (const auto& p : profile.points()) {
        rows.push_back(Json::array({p.r, p.f, p.fr, p.frr, p.w(),
                                    p.f > 0.0 ? Json(p.r * p.fr / p.f) : Json(nullptr)}));
    }
    j["points"] = std::move(rows);
    Json segs = Json::array();
    for (const auto& s : profile.segments()) {
        segs.push_back({{"first", s.first}, {"last", s.last}, {"provenance", to_string(s.provenance)}});
    }
    j["segments"] = std::move(segs);
    return j;
}

void write_profile_json(std::ostream& os, const RadialProfile& profile) {
    os << profile_to_json(profile).dump(1) << '\n';
}

RadialProfile read_profile_csv(std::istream& is, const Parameters& params) {
    std::string line;
    if (!std::getline(is, line)) {
        throw SchemaError("profile CSV: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kProfileHeader) {
        throw SchemaError("profile CSV: header must be '" + std::string(kProfileHeader) + "'");
    }
    std::vector<ProfilePoint> pts;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 6) {
            throw SchemaError("profile CSV: row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields, expected 6");
        }
        double v[5];
        for (int k = 0; k < 5; ++k) {
            const auto x = parse_number(fields[static_cast<std::size_t>(k)]);
            if (!x) {
                throw SchemaError("profile CSV: row " + std::to_string(row) + " column " +
                                  std::to_string(k + 1) + " is not a number");
            }
            v[k] = *x;
        }
        if (!fields[5].empty() && !parse_number(fields[5])) {
            throw SchemaError("profile CSV: row " + std::to_string(row) + " q is not a number");
        }
        pts.push_back({v[0], v[1], v[2], v[3]});
    }
    return build_profile(params, std::move(pts), {}, "profile CSV");
}

RadialProfile read_profile_json(std::istream& is) {
    Json j;
    try {
        j = Json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("profile JSON: ") + e.what());
    }
    try {
        const Parameters params = parameters_from_json(j.at("params"));
        std::vector<ProfilePoint> pts;
        for (const auto& row : j.at("points")) {
            if (!row.is_array() || row.size() != 6) {
                throw SchemaError("profile JSON: each point must have 6 entries");
            }
            pts.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                           row[3].get<double>()});
        }
        std::vector<ProfileSegment> segs;
        if (j.contains("segments")) {
            for (const auto& s : j.at("segments")) {
                segs.push_back({s.at("first").get<std::size_t>(), s.at("last").get<std::size_t>(),
                                provenance_from_string(s.at("provenance").get<std::string>())});
            }
        }
        return build_profile(params, std::move(pts), std::move(segs), "profile JSON");
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("profile JSON: ") + e.what());
    }
}

Json to_json(const Parameters& p) {
    return {{"n", p.n}, {"lambda", p.lambda}, {"mu", p.mu}};
}

Json to_json(const SolverConfig& c) {
    Json j;
    j["abs_tol"] = c.abs_tol;
    j["rel_tol"] = c.rel_tol;
    j["r_switch"] = c.r_switch ? Json(*c.r_switch) : Json(nullptr);
    j["picard_max_iter"] = c.picard_max_iter;
    j["picard_contraction_guard"] = c.picard_contraction_guard;
    j["r_max"] = c.r_max;
    j["output_grid"] = to_string(c.output_grid);
    j["grid_density"] = c.grid_density;
    j["mode"] = to_string(c.mode);
    return j;
}

Json to_json(const MonitorEvent& e) {
    return {{"kind", to_string(e.kind)},
            {"r", e.r},
            {"f", number_or_null(e.values.f)},
            {"fr", number_or_null(e.values.fr)},
            {"frr", number_or_null(e.values.frr)},
            {"w", number_or_null(e.values.w())}};
}

Json to_json(const std::vector<MonitorEvent>& events) {
    Json j = Json::array();
    for (const auto& e : events) {
        j.push_back(to_json(e));
    }
    return j;
}

Json to_json(const PicardDiagnostics& d) {
    Json j;
    j["iterations"] = d.iterations;
    j["observed_ratio"] = d.observed_ratio;
    j["converged"] = d.converged;
    j["eps"] = d.eps;
    j["restarts"] = d.restarts;
    j["nodes"] = d.nodes;
    j["min_denominator"] = number_or_null(d.min_denominator);
    Json dist = Json::array();
    for (double x : d.distances) {
        dist.push_back(number_or_null(x));
    }
    j["distances"] = std::move(dist);
    return j;
}

Json to_json(const ExtensionStats& s) {
    Json j;
    j["accepted_steps"] = s.accepted_steps;
    j["rejected_steps"] = s.rejected_steps;
    j["handoff_r"] = s.handoff_r;
    j["stiff_switch_r"] = s.stiff_switch_r ? Json(*s.stiff_switch_r) : Json(nullptr);
    j["far_field_r"] = s.far_field_r ? Json(*s.far_field_r) : Json(nullptr);
    j["error_estimate"] = number_or_null(s.error_estimate);
    return j;
}

Json to_json(const AsymptoticsReport& r) {
    Json j;
    j["alpha0"] = r.alpha0;
    j["q_limit_estimate"] = number_or_null(r.q_limit_estimate);
    j["extrapolation_uncertainty"] = number_or_null(r.extrapolation_uncertainty);
    j["fitted_order"] = number_or_null(r.fitted_order);
    j["fitted_constant"] = number_or_null(r.fitted_constant);
    j["fit_exponent"] = number_or_null(r.fit_exponent);
    j["q_at_r_max"] = number_or_null(r.q_at_r_max);
    j["pass"] = r.pass;
    Json samples = Json::array();
    for (const auto& s : r.q_samples) {
        samples.push_back(Json::array({s.r, number_or_null(s.q)}));
    }
    j["q_samples"] = std::move(samples);
    return j;
}

Json to_json(const VerificationReport& r) {
    Json j;
    j["ode_residual_max"] = number_or_null(r.ode_residual_max);
    j["integral_identity_defect_max"] = number_or_null(r.integral_identity_defect_max);
    j["integrating_factor_defect_max"] = number_or_null(r.integrating_factor_defect_max);
    j["pde_residual_max"] = number_or_null(r.pde_residual_max);
    j["oracle_mismatch_at_probe"] = number_or_null(r.oracle_mismatch_at_probe);
    j["grids_used"] = r.grids_used;
    j["probe_radii"] = r.probe_radii;
    j["pass"] = {{"ode_residual", r.ode_residual_pass},
                 {"integral_identity", r.integral_identity_pass},
                 {"integrating_factor", r.integrating_factor_pass},
                 {"pde_residual", r.pde_residual_pass},
                 {"oracle", r.oracle_pass},
                 {"all", r.pass()}};
    return j;
}

Parameters parameters_from_json(const Json& j) {
    Parameters p;
    p.n = j.at("n").get<int>();
    p.lambda = j.at("lambda").get<double>();
    p.mu = j.at("mu").get<double>();
    return p;
}

SolverConfig config_from_json(const Json& j) {
    SolverConfig c;
    c.abs_tol = j.at("abs_tol").get<double>();
    c.rel_tol = j.at("rel_tol").get<double>();
    if (j.contains("r_switch") && !j.at("r_switch").is_null()) {
        c.r_switch = j.at("r_switch").get<double>();
    }
    c.picard_max_iter = j.at("picard_max_iter").get<int>();
    c.picard_contraction_guard = j.at("picard_contraction_guard").get<double>();
    c.r_max = j.at("r_max").get<double>();
    c.output_grid = grid_policy_from_string(j.at("output_grid").get<std::string>());
    c.grid_density = j.at("grid_density").get<int>();
    c.mode = run_mode_from_string(j.at("mode").get<std::string>());
    return c;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace imcf::io
