#include "imcf/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "imcf/asymptotics.hpp"
#include "imcf/continuation.hpp"
#include "imcf/io.hpp"
#include "imcf/plot.hpp"
#include "imcf/verify.hpp"

namespace imcf::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// Every flag is captured as text and routed through the same parser as config-file entries,
// so precedence is simply: defaults, then the file, then flags.
struct Flags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool plot = false;
};

const std::vector<std::pair<std::string, std::string>> kCommonFlags = {
    {"n", "dimension n >= 2"},
    {"lambda", "self-similar rate lambda > 0"},
    {"mu", "origin height mu < 0"},
    {"r-max", "outer radius (default 100)"},
    {"tol", "absolute and relative tolerance (default 1e-12)"},
    {"abs-tol", "absolute tolerance"},
    {"rel-tol", "relative tolerance"},
    {"r-switch", "handoff radius from the origin construction (default 0.1 min(1,|mu|))"},
    {"grid", "output grid: log | uniform | adaptive-native (default log)"},
    {"grid-density", "points per decade (log) or intervals (uniform); default 240"},
    {"picard-max-iter", "iteration cap of the origin map (default 200)"},
    {"mode", "certified | exploratory (default certified)"},
    {"format", "csv | json (default csv)"},
    {"out", "output directory (default .)"},
    {"config", "key=value file; flags take precedence"},
};

void add_flags(CLI::App* app, Flags& f, const std::vector<std::pair<std::string, std::string>>& list) {
    for (const auto& [name, help] : list) {
        f.options[name] = app->add_option("--" + name, f.values[name], help);
    }
}

void add_common(CLI::App* app, Flags& f) {
    add_flags(app, f, kCommonFlags);
    f.options["plot"] = app->add_flag("--plot", f.plot, "write SVG plots of f and q");
}

struct Settings {
    std::optional<int> n;
    std::optional<double> lambda;
    std::optional<double> mu;
    SolverConfig config;
    std::string out = ".";
    std::string format = "csv";
    bool plot = false;
    std::string n_list;
    std::string lambda_list;
    std::string mu_list;
    std::string probe_radii;
    std::string profile;
};

std::string key_of(std::string name) {
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

double to_number(const std::string& key, const std::string& v) {
    const auto x = io::parse_number(v);
    if (!x || !std::isfinite(*x)) {
        throw UsageError("'" + key + "' expects a number, got '" + v + "'");
    }
    return *x;
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_number(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) {
        throw UsageError("'" + key + "' expects an integer, got '" + v + "'");
    }
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("'" + key + "' expects true|false, got '" + v + "'");
}

void apply(Settings& s, const std::string& raw_key, const std::string& v) {
    const std::string key = key_of(raw_key);
    if (key == "n") s.n = to_int(key, v);
    else if (key == "lambda") s.lambda = to_number(key, v);
    else if (key == "mu") s.mu = to_number(key, v);
    else if (key == "r_max") s.config.r_max = to_number(key, v);
    else if (key == "tol") s.config.abs_tol = s.config.rel_tol = to_number(key, v);
    else if (key == "abs_tol") s.config.abs_tol = to_number(key, v);
    else if (key == "rel_tol") s.config.rel_tol = to_number(key, v);
    else if (key == "r_switch") s.config.r_switch = to_number(key, v);
    else if (key == "grid") s.config.output_grid = grid_policy_from_string(v);
    else if (key == "grid_density") s.config.grid_density = to_int(key, v);
    else if (key == "picard_max_iter") s.config.picard_max_iter = to_int(key, v);
    else if (key == "mode") s.config.mode = run_mode_from_string(v);
    else if (key == "format") {
        if (v != "csv" && v != "json") throw UsageError("format must be csv or json");
        s.format = v;
    } else if (key == "out") s.out = v;
    else if (key == "plot") s.plot = to_bool(key, v);
    else if (key == "n_list") s.n_list = v;
    else if (key == "lambda_list") s.lambda_list = v;
    else if (key == "mu_list") s.mu_list = v;
    else if (key == "probe_radii") s.probe_radii = v;
    else if (key == "profile") s.profile = v;
    else throw UsageError("unknown setting '" + raw_key + "'");
}

Settings resolve(const Flags& f) {
    Settings s;
    const auto cfg = f.options.find("config");
    if (cfg != f.options.end() && cfg->second->count() > 0) {
        const std::string path = f.values.at("config");
        std::ifstream in(path);
        if (!in) {
            throw UsageError("cannot open config file '" + path + "'");
        }
        for (const auto& [k, v] : parse_config(in)) {
            apply(s, k, v);
        }
    }
    for (const auto& [name, opt] : f.options) {
        if (name == "config" || name == "plot" || opt->count() == 0) {
            continue;
        }
        apply(s, name, f.values.at(name));
    }
    if (f.plot) {
        s.plot = true;
    }
    return s;
}

Parameters params_of(const Settings& s) {
    if (!s.n || !s.lambda || !s.mu) {
        throw UsageError("--n, --lambda and --mu are required");
    }
    return validate(Parameters{*s.n, *s.lambda, *s.mu});
}

std::string threshold_message(const Parameters& p) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "certified mode requires lambda > 1/(n-1) = " << 1.0 / (p.n - 1) << ", i.e. lambda*(n-1) > 1;"
       << " got lambda*(n-1) = " << p.lambda * (p.n - 1) << " (use --mode exploratory)";
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw UsageError("cannot write '" + path.string() + "'");
    }
    os << text;
}

struct Analysis {
    std::optional<double> alpha0;
    std::optional<AsymptoticsReport> asymptotics;
    std::string asymptotics_note;
    std::optional<VerificationReport> verification;
    std::string verification_note;
};

Analysis analyze(const RadialProfile& profile, const VerifyOptions& vopt) {
    Analysis a;
    const Parameters& p = profile.params();
    if (p.global_regime) {
        a.alpha0 = alpha0(p);
        try {
            a.asymptotics = estimate_limit(profile, p);
        } catch (const Error& e) {
            a.asymptotics_note = e.what();
        }
    } else {
        a.asymptotics_note = "lambda*(n-1) <= 1: no asymptotic slope ratio";
    }
    try {
        a.verification = verify_profile(profile, vopt);
    } catch (const Error& e) {
        a.verification_note = e.what();
    }
    return a;
}

Json analysis_json(const Analysis& a) {
    Json j;
    j["alpha0"] = a.alpha0 ? Json(*a.alpha0) : Json(nullptr);
    j["q_limit_estimate"] = a.asymptotics ? Json(a.asymptotics->q_limit_estimate) : Json(nullptr);
    j["asymptotics"] = a.asymptotics ? io::to_json(*a.asymptotics) : Json(nullptr);
    if (!a.asymptotics_note.empty()) j["asymptotics_note"] = a.asymptotics_note;
    j["verification"] = a.verification ? io::to_json(*a.verification) : Json(nullptr);
    if (!a.verification_note.empty()) j["verification_note"] = a.verification_note;
    return j;
}

Json config_json(const Settings& s, const SolverConfig& resolved) {
    Json j = io::to_json(resolved);
    j["format"] = s.format;
    j["plot"] = s.plot;
    return j;
}

Json manifest(const std::string& command, const std::vector<std::string>& argv) {
    Json j;
    j["command"] = command;
    j["argv"] = argv;
    j["timestamp"] = io::utc_timestamp();
    j["solver_version"] = kVersion;
    return j;
}

std::vector<std::string> write_plots(const fs::path& dir, const RadialProfile& profile,
                                     std::optional<double> a0) {
    std::vector<double> r, f, rq, q;
    for (const auto& p : profile.points()) {
        if (p.r <= 0.0) continue;
        r.push_back(p.r);
        f.push_back(p.f);
        if (p.f > 0.0) {
            rq.push_back(p.r);
            q.push_back(p.r * p.fr / p.f);
        }
    }
    const auto& pr = profile.params();
    std::ostringstream title;
    title.imbue(std::locale::classic());
    title << "n = " << pr.n << ", lambda = " << pr.lambda << ", mu = " << pr.mu;

    plot::Chart fc;
    fc.title = "profile f(r), " + title.str();
    fc.x_label = "r";
    fc.y_label = "f";
    fc.log_x = true;
    write_text(dir / "profile_f.svg", plot::render_svg(fc, {{r, f, "f", "#1f77b4"}}));

    plot::Chart qc;
    qc.title = "slope ratio q = r fr / f, " + title.str();
    qc.x_label = "r";
    qc.y_label = "q";
    qc.log_x = true;
    qc.y_min = 0.0;
    if (a0) {
        qc.rule_y = *a0;
        qc.rule_label = "alpha0";
        qc.y_max = 3.0 * *a0;
    }
    write_text(dir / "profile_q.svg", plot::render_svg(qc, {{rq, q, "q", "#2ca02c"}}));
    return {"profile_f.svg", "profile_q.svg"};
}

void print_summary(std::ostream& out, const Parameters& p, const ProfileSolution& sol, const Analysis& a) {
    out << "n=" << p.n << " lambda=" << io::format_number(p.lambda) << " mu=" << io::format_number(p.mu)
        << " r_max=" << io::format_number(sol.profile.r_max()) << " nodes=" << sol.profile.size()
        << " events=" << sol.events.size() << '\n';
    if (a.alpha0) {
        out << "alpha0=" << io::format_number(*a.alpha0);
        if (a.asymptotics) {
            out << " q_limit_estimate=" << io::format_number(a.asymptotics->q_limit_estimate)
                << " q(r_max)=" << io::format_number(a.asymptotics->q_at_r_max)
                << " asymptotics_pass=" << (a.asymptotics->pass ? "true" : "false");
        }
        out << '\n';
    }
    for (const auto& e : sol.events) {
        out << "event " << to_string(e.kind) << " at r=" << io::format_number(e.r) << '\n';
    }
}

int run_solve(const Settings& s, const std::string& command, const std::vector<std::string>& argv,
              std::ostream& out, std::ostream& err) {
    const Parameters p = params_of(s);
    if (s.config.mode == RunMode::Certified && !p.global_regime) {
        throw DomainError(threshold_message(p));
    }
    const SolverConfig config = validate(s.config, p);
    const fs::path dir(s.out);
    fs::create_directories(dir);

    Json man = manifest(command, argv);
    man["params"] = io::to_json(p);
    man["config"] = config_json(s, config);

    std::optional<ProfileSolution> sol;
    try {
        sol = solve_profile(p, config);
    } catch (const MonitorBreakdown& e) {
        man["outputs"] = Json::object();
        man["summary"] = {{"status", "breakdown"}, {"events", io::to_json(std::vector{e.event()})}};
        write_text(dir / "manifest.json", man.dump(2) + "\n");
        err << "error: " << e.what() << '\n';
        return kBreakdown;
    } catch (const StepUnderflow& e) {
        man["outputs"] = Json::object();
        man["summary"] = {{"status", "breakdown"}, {"message", e.what()}};
        write_text(dir / "manifest.json", man.dump(2) + "\n");
        err << "error: " << e.what() << '\n';
        return kBreakdown;
    }

    Json outputs;
    std::ostringstream table;
    if (s.format == "json") {
        io::write_profile_json(table, sol->profile);
        write_text(dir / "profile.json", table.str());
        outputs["profile"] = "profile.json";
    } else {
        io::write_profile_csv(table, sol->profile);
        write_text(dir / "profile.csv", table.str());
        outputs["profile"] = "profile.csv";
    }
    const Analysis a = analyze(sol->profile, {});
    if (s.plot) {
        outputs["plots"] = write_plots(dir, sol->profile, a.alpha0);
    }
    outputs["manifest"] = "manifest.json";
    man["outputs"] = outputs;
    Json summary = {{"status", "ok"}};
    summary.update(analysis_json(a));
    summary["events"] = io::to_json(sol->events);
    summary["origin"] = io::to_json(sol->origin);
    summary["extension"] = io::to_json(sol->stats);
    man["summary"] = std::move(summary);
    write_text(dir / "manifest.json", man.dump(2) + "\n");

    print_summary(out, p, *sol, a);
    return kPass;
}

struct Row {
    Parameters params;
    bool certified = false;
    std::string status = "pending";
    std::string message;
    std::size_t events = 0;
    std::optional<double> alpha0;
    std::optional<AsymptoticsReport> asymptotics;
    std::optional<VerificationReport> verification;
    bool pass = false;
};

Row compute_row(const Parameters& p, const SolverConfig& base) {
    Row row;
    row.params = p;
    row.certified = p.global_regime;
    if (base.mode == RunMode::Certified && !p.global_regime) {
        row.status = "refused";
        row.message = threshold_message(p);
        return row;
    }
    try {
        const SolverConfig config = validate(base, p);
        const ProfileSolution sol = solve_profile(p, config);
        const Analysis a = analyze(sol.profile, {});
        row.events = sol.events.size();
        row.alpha0 = a.alpha0;
        row.asymptotics = a.asymptotics;
        row.verification = a.verification;
        row.status = "ok";
        row.message = a.asymptotics_note.empty() ? a.verification_note : a.asymptotics_note;
        row.pass = row.events == 0 && row.asymptotics && row.asymptotics->pass &&
                   row.verification && row.verification->pass();
    } catch (const MonitorBreakdown& e) {
        row.status = "breakdown";
        row.message = e.what();
        row.events = 1;
    } catch (const StepUnderflow& e) {
        row.status = "breakdown";
        row.message = e.what();
    } catch (const std::exception& e) {
        row.status = "failed";
        row.message = e.what();
    }
    return row;
}

std::string opt_num(const std::optional<double>& x) {
    return x && std::isfinite(*x) ? io::format_number(*x) : std::string();
}

std::string sweep_csv(const std::vector<Row>& rows) {
    std::ostringstream os;
    os << "n,lambda,mu,alpha0,q_limit_estimate,abs_q_minus_alpha0,extrapolation_uncertainty,"
          "q_at_r_max,ode_residual_max,integral_identity_defect_max,integrating_factor_defect_max,"
          "pde_residual_max,oracle_mismatch_at_probe,events,status,certified,pass\n";
    for (const auto& r : rows) {
        std::optional<double> qlim, dq, unc, qmax;
        if (r.asymptotics) {
            qlim = r.asymptotics->q_limit_estimate;
            dq = std::abs(r.asymptotics->q_limit_estimate - r.asymptotics->alpha0);
            unc = r.asymptotics->extrapolation_uncertainty;
            qmax = r.asymptotics->q_at_r_max;
        }
        std::optional<double> d1, d2, d3, d4, d5;
        if (r.verification) {
            d1 = r.verification->ode_residual_max;
            d2 = r.verification->integral_identity_defect_max;
            d3 = r.verification->integrating_factor_defect_max;
            d4 = r.verification->pde_residual_max;
            d5 = r.verification->oracle_mismatch_at_probe;
        }
        os << r.params.n << ',' << io::format_number(r.params.lambda) << ','
           << io::format_number(r.params.mu) << ',' << opt_num(r.alpha0) << ',' << opt_num(qlim)
           << ',' << opt_num(dq) << ',' << opt_num(unc) << ',' << opt_num(qmax) << ','
           << opt_num(d1) << ',' << opt_num(d2) << ',' << opt_num(d3) << ',' << opt_num(d4) << ','
           << opt_num(d5) << ',' << r.events << ',' << r.status << ','
           << (r.certified ? "true" : "false") << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

Json row_json(const Row& r) {
    Json j;
    j["params"] = io::to_json(r.params);
    j["certified"] = r.certified;
    j["status"] = r.status;
    j["message"] = r.message;
    j["events"] = r.events;
    j["alpha0"] = r.alpha0 ? Json(*r.alpha0) : Json(nullptr);
    j["asymptotics"] = r.asymptotics ? io::to_json(*r.asymptotics) : Json(nullptr);
    j["verification"] = r.verification ? io::to_json(*r.verification) : Json(nullptr);
    j["pass"] = r.pass;
    return j;
}

std::vector<int> int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    for (double x : parse_list(text)) {
        if (x != std::floor(x)) {
            throw UsageError(key + " entries must be integers");
        }
        out.push_back(static_cast<int>(x));
    }
    return out;
}

int run_sweep(const Settings& s, const std::vector<std::string>& argv, std::ostream& out,
              std::ostream& err) {
    std::vector<int> ns = s.n_list.empty() ? std::vector<int>{} : int_list("--n-list", s.n_list);
    std::vector<double> lams = s.lambda_list.empty() ? std::vector<double>{} : parse_list(s.lambda_list);
    std::vector<double> mus = s.mu_list.empty() ? std::vector<double>{} : parse_list(s.mu_list);
    if (ns.empty() && s.n) ns.push_back(*s.n);
    if (lams.empty() && s.lambda) lams.push_back(*s.lambda);
    if (mus.empty() && s.mu) mus.push_back(*s.mu);
    if (ns.empty() || lams.empty() || mus.empty()) {
        throw UsageError("empty grid: give --n-list, --lambda-list and --mu-list (or --n/--lambda/--mu)");
    }

    std::vector<Parameters> grid;
    for (int n : ns) {
        for (double lam : lams) {
            for (double mu : mus) {
                grid.push_back(validate(Parameters{n, lam, mu}));
            }
        }
    }
    std::vector<Row> rows(grid.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min(pool_size(), grid.size());
    auto work = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            rows[i] = compute_row(grid[i], s.config);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }

    const fs::path dir(s.out);
    fs::create_directories(dir);
    Json outputs;
    if (s.format == "json") {
        Json data = Json::array();
        for (const auto& r : rows) data.push_back(row_json(r));
        write_text(dir / "sweep.json", data.dump(1) + "\n");
        outputs["table"] = "sweep.json";
    } else {
        write_text(dir / "sweep.csv", sweep_csv(rows));
        outputs["table"] = "sweep.csv";
    }
    outputs["manifest"] = "manifest.json";

    bool all_pass = true;
    std::size_t certified = 0;
    Json summary_rows = Json::array();
    for (const auto& r : rows) {
        if (r.certified) {
            ++certified;
            all_pass = all_pass && r.pass;
        }
        summary_rows.push_back(row_json(r));
        out << "n=" << r.params.n << " lambda=" << io::format_number(r.params.lambda)
            << " mu=" << io::format_number(r.params.mu) << " status=" << r.status
            << " alpha0=" << opt_num(r.alpha0) << " q_limit="
            << (r.asymptotics ? io::format_number(r.asymptotics->q_limit_estimate) : std::string("-"))
            << " pass=" << (r.pass ? "true" : "false") << '\n';
        if (r.status == "failed" || r.status == "breakdown") {
            err << "row n=" << r.params.n << " lambda=" << io::format_number(r.params.lambda)
                << " mu=" << io::format_number(r.params.mu) << ": " << r.message << '\n';
        }
    }

    Json man = manifest("sweep", argv);
    Json cfg = config_json(s, s.config);
    man["config"] = cfg;
    man["grid"] = {{"n_list", ns}, {"lambda_list", lams}, {"mu_list", mus}};
    man["outputs"] = outputs;
    man["summary"] = {{"rows", rows.size()},
                      {"certified_rows", certified},
                      {"all_certified_pass", all_pass},
                      {"rows_detail", summary_rows}};
    write_text(dir / "manifest.json", man.dump(2) + "\n");
    out << (all_pass ? "all certified rows pass" : "some certified rows failed") << " (" << certified
        << " certified of " << rows.size() << ")\n";
    return all_pass ? kPass : kBreakdown;
}

int run_verify(const Settings& s, const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
    std::optional<RadialProfile> profile;
    Json man = manifest("verify", argv);
    if (!s.profile.empty()) {
        std::ifstream in(s.profile, std::ios::binary);
        if (!in) {
            throw UsageError("cannot open profile '" + s.profile + "'");
        }
        if (fs::path(s.profile).extension() == ".json") {
            profile = io::read_profile_json(in);
        } else {
            profile = io::read_profile_csv(in, params_of(s));
        }
        man["input_profile"] = s.profile;
    } else {
        const Parameters p = params_of(s);
        if (s.config.mode == RunMode::Certified && !p.global_regime) {
            throw DomainError(threshold_message(p));
        }
        const SolverConfig config = validate(s.config, p);
        try {
            profile = solve_profile(p, config).profile;
        } catch (const MonitorBreakdown& e) {
            err << "error: " << e.what() << '\n';
            return kBreakdown;
        }
        man["config"] = config_json(s, config);
    }
    man["params"] = io::to_json(profile->params());

    VerifyOptions vopt;
    if (!s.probe_radii.empty()) {
        vopt.probe_radii = parse_list(s.probe_radii);
    }
    const VerificationReport rep = verify_profile(*profile, vopt);

    const fs::path dir(s.out);
    fs::create_directories(dir);
    write_text(dir / "verification.json", io::to_json(rep).dump(2) + "\n");
    man["outputs"] = {{"report", "verification.json"}, {"manifest", "manifest.json"}};
    man["summary"] = {{"pass", rep.pass()}, {"verification", io::to_json(rep)}};
    write_text(dir / "manifest.json", man.dump(2) + "\n");

    out << "ode_residual_max=" << io::format_number(rep.ode_residual_max)
        << " integral_identity_defect_max=" << io::format_number(rep.integral_identity_defect_max)
        << " integrating_factor_defect_max=" << io::format_number(rep.integrating_factor_defect_max)
        << " pde_residual_max=" << io::format_number(rep.pde_residual_max)
        << " oracle_mismatch_at_probe=" << io::format_number(rep.oracle_mismatch_at_probe) << '\n'
        << "pass=" << (rep.pass() ? "true" : "false") << '\n';
    return rep.pass() ? kPass : kBreakdown;
}

int run_replay(const std::string& path, const std::string& out_dir, const std::vector<std::string>& argv,
               std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open manifest '" + path + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("manifest: ") + e.what());
    }
    try {
        const std::string command = j.at("command").get<std::string>();
        Settings s;
        s.config = io::config_from_json(j.at("config"));
        s.format = j.at("config").at("format").get<std::string>();
        s.plot = j.at("config").at("plot").get<bool>();
        s.out = out_dir;
        if (command == "solve") {
            const Parameters p = io::parameters_from_json(j.at("params"));
            s.n = p.n;
            s.lambda = p.lambda;
            s.mu = p.mu;
            return run_solve(s, "solve", argv, out, err);
        }
        if (command == "sweep") {
            auto join = [](const Json& arr) {
                std::string t;
                for (const auto& x : arr) {
                    t += (t.empty() ? "" : ",") + io::format_number(x.get<double>());
                }
                return t;
            };
            s.n_list = join(j.at("grid").at("n_list"));
            s.lambda_list = join(j.at("grid").at("lambda_list"));
            s.mu_list = join(j.at("grid").at("mu_list"));
            return run_sweep(s, argv, out, err);
        }
        throw SchemaError("manifest: replay supports solve and sweep manifests, not '" + command + "'");
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("manifest: ") + e.what());
    }
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = t.find_last_not_of(" \t\r");
        return t.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw UsageError("config line " + std::to_string(lineno) + ": empty key");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string cur;
    std::stringstream ss(text);
    while (std::getline(ss, cur, ',')) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        if (b == std::string::npos) {
            throw UsageError("empty entry in list '" + text + "'");
        }
        out.push_back(to_number("list", cur.substr(b, e - b + 1)));
    }
    return out;
}

std::size_t pool_size() {
    if (const char* env = std::getenv("IMCF_PROFILE_THREADS")) {
        const auto v = io::parse_number(env);
        if (v && *v >= 1.0 && *v == std::floor(*v)) {
            return static_cast<std::size_t>(*v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-similar profiles of graphical inverse mean curvature flow", "imcf-profile"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Flags solve_flags, sweep_flags, verify_flags;
    auto* solve = app.add_subcommand("solve", "solve one (n, lambda, mu) instance");
    add_common(solve, solve_flags);
    auto* sweep = app.add_subcommand("sweep", "solve the Cartesian grid of parameter lists");
    add_common(sweep, sweep_flags);
    add_flags(sweep, sweep_flags,
              {{"n-list", "comma-separated n values"},
               {"lambda-list", "comma-separated lambda values"},
               {"mu-list", "comma-separated mu values"}});
    auto* verify = app.add_subcommand("verify", "run the verification checks on a profile");
    add_common(verify, verify_flags);
    add_flags(verify, verify_flags,
              {{"probe-radii", "comma-separated radii for the identity and PDE checks"},
               {"profile", "verify this profile file (.csv or .json) instead of solving"}});
    std::string manifest_path;
    std::string replay_out = ".";
    auto* replay = app.add_subcommand("replay", "rerun the solve or sweep recorded in a manifest");
    replay->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
    replay->add_option("--out", replay_out, "output directory (default .)");

    std::vector<std::string> args(argv, argv + argc);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (solve->parsed()) {
            return run_solve(resolve(solve_flags), "solve", args, out, err);
        }
        if (sweep->parsed()) {
            return run_sweep(resolve(sweep_flags), args, out, err);
        }
        if (verify->parsed()) {
            return run_verify(resolve(verify_flags), args, out, err);
        }
        if (replay->parsed()) {
            return run_replay(manifest_path, replay_out, args, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kUsage;
    } catch (const OutOfRange& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBreakdown;
    }
    return kUsage;
}

}  // namespace imcf::cli
