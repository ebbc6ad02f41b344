#include "gl3twist/cli.hpp"

#include "gl3twist/harness.hpp"
#include "gl3twist/parallel.hpp"
#include "gl3twist/pipeline.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gl3twist {

namespace {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
}

/// Inserts "--key value" for every config entry not already given as a flag.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].starts_with("--config=")) path = args[i].substr(9);
    }
    if (path.empty() || args.empty() || args[0].starts_with("-")) return args;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::vector<std::string> extra;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.starts_with("--")) key = key.substr(2);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty() || key == "config")
            throw ConfigError(path + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        if (given_on_command_line(args, key)) continue;
        extra.push_back("--" + key);
        extra.push_back(value);
    }
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

std::vector<std::pair<i64, i64>> parse_pairs(const std::vector<std::string>& items, const char* what) {
    std::vector<std::pair<i64, i64>> out;
    for (const auto& s : items) {
        const auto colon = s.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument(s);
            std::size_t used1 = 0, used2 = 0;
            const i64 a = std::stoll(s.substr(0, colon), &used1), b = std::stoll(s.substr(colon + 1), &used2);
            if (used1 != colon || used2 != s.size() - colon - 1) throw std::invalid_argument(s);
            out.emplace_back(a, b);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": expected x:y pairs, got '" + s + "'");
        }
    }
    return out;
}

std::vector<std::string> pairs_text(const std::vector<std::pair<i64, i64>>& xs) {
    std::vector<std::string> out;
    for (const auto& [a, b] : xs) out.push_back(std::to_string(a) + ":" + std::to_string(b));
    return out;
}

int emit(const Report& rep, const std::string& out_dir, std::ostream& out) {
    for (const auto& c : rep.checks) out << summary_line(c) << '\n';
    const auto [csv, json] = rep.write(out_dir);
    const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return !c.pass; });
    out << rep.subcommand << ": " << rep.checks.size() << " checks, " << failed << " failed; wrote " << csv.string()
        << " and " << json.string() << '\n';
    return failed == 0 ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"Numerical verification harnesses for GL(3) x GL(1) twists", "gl3twist"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string out_dir = "reports", config;
    unsigned workers = 0;
    auto common = [&](CLI::App* sub, bool parallel) {
        sub->add_option("--config", config, "Flat key=value file; flags override its entries");
        sub->add_option("--out", out_dir, "Directory for the CSV and JSON reports")->capture_default_str();
        if (parallel)
            sub->add_option("--workers", workers, "Worker threads (default: GL3TWIST_WORKERS or 1)")
                ->check(CLI::PositiveNumber);
    };
    auto tolerance = [](CLI::App* sub, const std::string& name, double& v, const std::string& help) {
        sub->add_option(name, v, help)->capture_default_str()->check(CLI::Range(kToleranceFloor, 1e300));
    };
    std::function<Report()> action;

    DeltaSettings delta;
    auto* d = app.add_subcommand("delta-verify", "delta_eval against the delta symbol on |n| <= nmax");
    d->add_option("--nmax", delta.nmax, "Largest |n|")->capture_default_str();
    d->add_option("--Q", delta.Q, "Comma-separated Q values (Q >= 1)")->delimiter(',')->capture_default_str();
    tolerance(d, "--tol", delta.tol, "Absolute tolerance");
    common(d, false);
    d->final_callback([&] { action = [&] { return delta_verify(delta); }; });

    CharsumSettings charsum;
    auto* c = app.add_subcommand("charsum-verify", "Gauss sums and the E, D, C* closed forms against brute force");
    c->add_option("--M1", charsum.M1, "First prime modulus")->capture_default_str();
    c->add_option("--M2", charsum.M2, "Second prime modulus")->capture_default_str();
    c->add_option("--qmax", charsum.qmax, "Largest q")->capture_default_str();
    tolerance(c, "--tol", charsum.tol, "Relative tolerance of the closed forms");
    tolerance(c, "--gauss-tol", charsum.gauss_tol, "Tolerance on |gauss_sum| - sqrt(M)");
    c->add_option("--cstar-cap", charsum.cstar_cap, "Cap on the C* constants")->capture_default_str();
    common(c, false);
    c->final_callback([&] { action = [&] { return charsum_verify(charsum); }; });

    GammaSettings gamma;
    std::string normalization = "2e";
    auto* g = app.add_subcommand("gamma-verify", "Growth exponents of gamma_pm and the Psi factor");
    g->add_option("--sigma", gamma.sigma, "Comma-separated abscissas")->delimiter(',')->capture_default_str();
    g->add_option("--exponent-tol", gamma.exponent_tol, "Tolerance on the growth exponent")->capture_default_str();
    g->add_option("--slope-tol", gamma.slope_tol, "Tolerance on the Psi' slope")->capture_default_str();
    g->add_option("--cap", gamma.cap, "Cap on tau |Psi'|")->capture_default_str();
    g->add_option("--normalization", normalization, "Psi phase base: 2e or e")
        ->check(CLI::IsMember({"2e", "e"}))
        ->capture_default_str();
    common(g, false);
    g->final_callback([&] {
        gamma.normalization = normalization == "e" ? PsiNormalization::E : PsiNormalization::TwoE;
        action = [&] { return gamma_verify(gamma); };
    });

    StationarySettings stat;
    auto* st = app.add_subcommand("stationary-verify", "U-dagger expansion rates and second-derivative stationary phase");
    st->add_option("--r", stat.r, "Comma-separated r values at x0 = 1.5")->delimiter(',')->capture_default_str();
    st->add_option("--weight", stat.weight, "U, W or V")->check(CLI::IsMember({"U", "W", "V"}))->capture_default_str();
    st->add_option("--order1-tol", stat.order1_tol, "Tolerance on the order-1 rate")->capture_default_str();
    st->add_option("--order5-tol", stat.order5_tol, "Tolerance on the order-5 rate")->capture_default_str();
    st->add_option("--T", stat.T, "Comma-separated quadratic phase sizes")->delimiter(',')->capture_default_str();
    st->add_option("--cap", stat.cap, "Cap on the fitted constants")->capture_default_str();
    common(st, false);
    st->final_callback([&] { action = [&] { return stationary_verify(stat); }; });

    VoronoiSettings vor;
    std::vector<std::string> vor_cases = pairs_text(vor.cases);
    auto* v = app.add_subcommand("voronoi-verify", "Two-sided Voronoi agreement for sym2(Delta)");
    v->add_option("--cases", vor_cases, "Comma-separated q:a pairs")->delimiter(',')->capture_default_str();
    v->add_option("--N", vor.N, "Comma-separated lengths")->delimiter(',')->capture_default_str();
    v->add_option("--max-terms", vor.max_terms, "Dual n2 cutoff (0: from the tail estimate)")->capture_default_str();
    tolerance(v, "--tol", vor.tol, "Relative tolerance");
    v->add_option("--sharpness", vor.sharpness, "Sharpness of the V weight")->capture_default_str();
    common(v, false);
    v->final_callback([&] {
        action = [&] {
            vor.cases = parse_pairs(vor_cases, "--cases");
            return voronoi_verify(vor);
        };
    });

    PoissonSettings poi;
    auto* p = app.add_subcommand("poisson-verify", "Poisson summation for character-twisted smooth sums");
    p->add_option("--scale", poi.scale, "Length of the m-sum")->capture_default_str();
    tolerance(p, "--tol", poi.tol, "Tolerance relative to the absolute mass");
    common(p, false);
    p->final_callback([&] { action = [&] { return poisson_verify(poi); }; });

    RecomposeSettings rec;
    auto* r = app.add_subcommand("recompose-verify", "Delta-expansion recomposition and the S0/S1 split");
    r->add_option("--N", rec.N, "Comma-separated N (<= 2000)")->delimiter(',')->capture_default_str();
    r->add_option("--t", rec.t, "Comma-separated t")->delimiter(',')->capture_default_str();
    r->add_option("--K", rec.K, "Comma-separated K (<= 10)")->delimiter(',')->capture_default_str();
    r->add_option("--M1", rec.M1, "Modulus carrying the conductor lowering")->capture_default_str();
    r->add_option("--M2", rec.M2, "Second modulus")->capture_default_str();
    r->add_option("--oracle", rec.oracle, "d3 or sym2")->check(CLI::IsMember({"d3", "sym2"}))->capture_default_str();
    tolerance(r, "--tol", rec.tol, "Relative tolerance");
    common(r, true);
    r->final_callback([&] {
        action = [&] {
            rec.workers = workers ? workers : workers_from_env(1);
            return recompose_verify(rec);
        };
    });

    EnvelopeScanSettings ss;
    std::vector<std::string> ss_moduli = pairs_text(ss.moduli);
    auto* s = app.add_subcommand("s-scan", "S-flat and S-sharp against their envelopes");
    s->add_option("--oracle", ss.oracle, "d3 or sym2")->check(CLI::IsMember({"d3", "sym2"}))->capture_default_str();
    s->add_option("--moduli", ss_moduli, "Comma-separated M1:M2 pairs")->delimiter(',')->capture_default_str();
    s->add_option("--t", ss.t, "Comma-separated t")->delimiter(',')->capture_default_str();
    s->add_option("--N", ss.N, "Comma-separated N")->delimiter(',')->capture_default_str();
    s->add_option("--cap", ss.cap, "Cap on the fitted constants")->capture_default_str();
    common(s, true);
    s->final_callback([&] {
        action = [&] {
            ss.moduli = parse_pairs(ss_moduli, "--moduli");
            ss.workers = workers ? workers : workers_from_env(1);
            return s_scan(ss);
        };
    });

    ExponentScanSettings es;
    std::vector<std::string> es_moduli = pairs_text(es.moduli);
    auto* e = app.add_subcommand("exponent-scan", "|S(N)|/sqrt(N) against (Mt)^{3/4 - delta}");
    e->add_option("--oracle", es.oracle, "d3 or sym2")->check(CLI::IsMember({"d3", "sym2"}))->capture_default_str();
    e->add_option("--moduli", es_moduli, "Comma-separated M1:M2 pairs")->delimiter(',')->capture_default_str();
    e->add_option("--t", es.t, "Comma-separated t")->delimiter(',')->capture_default_str();
    e->add_option("--delta", es.delta, "Target saving below 3/4")->capture_default_str();
    e->add_option("--cap", es.cap, "Cap on the fitted constants")->capture_default_str();
    common(e, true);
    e->final_callback([&] {
        action = [&] {
            es.moduli = parse_pairs(es_moduli, "--moduli");
            es.workers = workers ? workers : workers_from_env(1);
            return exponent_scan_report(es);
        };
    });

    std::string report_dir;
    bool report_out_given = false;
    auto* rp = app.add_subcommand("report", "Aggregate the JSON reports of a directory");
    rp->add_option("--dir", report_dir, "Directory holding the reports")->required();
    common(rp, false);
    rp->final_callback([&] {
        report_out_given = rp->count("--out") > 0;
        action = [&] { return aggregate_reports(load_reports(report_dir)); };
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex, out, err);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex, out, err);
    } catch (const CLI::ParseError& ex) {
        err << "usage error: " << ex.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    Report rep;
    try {
        rep = action();
    } catch (const BoxError& ex) {
        err << "configuration error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        err << "configuration error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitCheckFailed;
    }

    try {
        if (rep.subcommand == "report") {
            out << "aggregated " << rep.config.size() << " reports from " << report_dir << '\n';
            for (const auto& [stem, status] : rep.config) out << "  " << status << ' ' << stem << '\n';
            return emit(rep, report_out_given ? out_dir : report_dir, out);
        }
        return emit(rep, out_dir, out);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace gl3twist
