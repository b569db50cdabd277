#include "resopt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "resopt/error.hpp"
#include "resopt/io.hpp"
#include "resopt/rearrange.hpp"
#include "resopt/transcend.hpp"

namespace resopt::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxCells = 2'000'000;

double parse_number(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw ConfigError(what + ": '" + std::string(text) + "' is not a finite number");
    return v;
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
    return v;
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

ModelParams parse_params(const json& j, ModelParams p) {
    reject_unknown(j, {"alpha", "kappa", "m0"}, "params");
    if (j.contains("alpha")) p.alpha = number(j["alpha"], "params.alpha");
    if (j.contains("kappa")) p.kappa = number(j["kappa"], "params.kappa");
    if (j.contains("m0")) p.m0 = number(j["m0"], "params.m0");
    return p;
}

Boundary parse_boundary(const json& j) {
    reject_unknown(j, {"kind", "beta"}, "boundary");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("boundary.kind must be a string");
    const auto kind = j["kind"].get<std::string>();
    if (kind == "dirichlet") {
        if (j.contains("beta")) throw ConfigError("boundary.beta is not used with kind 'dirichlet'");
        return Boundary::dirichlet();
    }
    if (kind == "neumann") {
        if (j.contains("beta") && number(j["beta"], "boundary.beta") != 0.0)
            throw ConfigError("boundary.beta must be 0 with kind 'neumann'");
        return Boundary::neumann();
    }
    if (kind == "robin") {
        if (!j.contains("beta")) throw ConfigError("boundary kind 'robin' needs beta");
        const double b = number(j["beta"], "boundary.beta");
        if (b < 0.0) throw ConfigError("boundary.beta must be nonnegative");
        return Boundary::robin(b);
    }
    throw ConfigError("boundary.kind must be robin, neumann or dirichlet");
}

std::vector<double> parse_betas(const json& j) {
    if (j.is_array()) {
        std::vector<double> out;
        for (const auto& v : j) out.push_back(number(v, "betas entry"));
        return out;
    }
    reject_unknown(j, {"log_space"}, "betas");
    if (!j.contains("log_space")) throw ConfigError("betas must be a list or {\"log_space\": {...}}");
    const auto& ls = j["log_space"];
    reject_unknown(ls, {"min", "max", "count"}, "betas.log_space");
    if (!ls.contains("min") || !ls.contains("max") || !ls.contains("count"))
        throw ConfigError("betas.log_space needs min, max and count");
    const double lo = number(ls["min"], "betas.log_space.min");
    const double hi = number(ls["max"], "betas.log_space.max");
    if (!ls["count"].is_number_integer() || ls["count"].get<long long>() < 0) throw ConfigError("betas.log_space.count must be a nonnegative integer");
    const auto count = ls["count"].get<std::size_t>();
    if (!(lo > 0.0 && hi >= lo)) throw ConfigError("betas.log_space needs 0 < min <= max");
    return log_space(lo, hi, count);
}

void set_beta(RunConfig& cfg, std::string_view text) {
    if (text == "inf" || text == "dirichlet") {
        cfg.boundary = Boundary::dirichlet();
        return;
    }
    const double b = parse_number(text, "beta");
    if (b < 0.0) throw ConfigError("beta must be nonnegative");
    cfg.boundary = Boundary::robin(b);
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const BracketError*>(&e)) return "BracketError";
    if (dynamic_cast<const RankError*>(&e)) return "RankError";
    if (dynamic_cast<const AssemblyError*>(&e)) return "AssemblyError";
    if (dynamic_cast<const SizeError*>(&e)) return "SizeError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "std::exception";
}

json params_json(const ModelParams& p) { return {{"alpha", p.alpha}, {"kappa", p.kappa}, {"m0", p.m0}}; }

json boundary_json(const Boundary& bc) {
    if (bc.is_dirichlet()) return {{"kind", "dirichlet"}};
    if (bc.is_neumann()) return {{"kind", "neumann"}};
    return {{"kind", "robin"}, {"beta", bc.beta()}};
}

void write_json(const std::filesystem::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

BangBangSpec require_bang_bang(const RunConfig& cfg, const char* command) {
    if (cfg.weight) throw ConfigError(std::string(command) + " needs a bang_bang weight, not explicit pieces");
    return cfg.bang_bang.value_or(BangBangSpec{});
}

}  // namespace

double RunConfig::delta() const {
    return bang_bang && bang_bang->delta ? *bang_bang->delta : params.delta_star();
}

PiecewiseWeight RunConfig::resolved_weight() const {
    if (weight) return *weight;
    if (bang_bang) return BangBangInterval{bang_bang->xi, delta(), params}.weight();
    throw ConfigError("no weight given (use \"weight\" in the config or --params xi=...)");
}

double RunConfig::tolerance(const std::string& name, double fallback) const {
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

SolverOptions RunConfig::solver_options() const {
    SolverOptions o;
    o.lambda_rel_tol = tolerance("lambda_rel_tol", o.lambda_rel_tol);
    return o;
}

DesignOptions RunConfig::design_options() const {
    DesignOptions o;
    o.locate.xi_tol = tolerance("xi_tol", o.locate.xi_tol);
    o.locate.degenerate_band = tolerance("degenerate_band", o.locate.degenerate_band);
    o.locate.endpoint_rel_tol = tolerance("endpoint_rel_tol", o.locate.endpoint_rel_tol);
    // Richardson pairs on grid_n / 2 and grid_n cells.
    o.locate.dirichlet_cells = std::max<std::size_t>(4, grid_n / 2);
    o.mass_tol = tolerance("mass_tol", o.mass_tol);
    return o;
}

SweepOptions RunConfig::sweep_options() const {
    SweepOptions o;
    o.design = design_options();
    o.switch_tol = tolerance("switch_tol", o.switch_tol);
    return o;
}

const std::vector<std::string>& tolerance_names() {
    static const std::vector<std::string> names{
        "lambda_rel_tol", "xi_tol", "degenerate_band", "endpoint_rel_tol",
        "mass_tol", "switch_tol", "agreement_rel_tol", "monotonicity_slack",
    };
    return names;
}

RunConfig parse_config(const json& j) {
    reject_unknown(j, {"params", "boundary", "weight", "betas", "grid_n", "tolerances", "output", "seed"},
                   "config");
    RunConfig cfg;
    try {
        if (j.contains("params")) cfg.params = parse_params(j["params"], cfg.params);
        if (j.contains("boundary")) cfg.boundary = parse_boundary(j["boundary"]);
        if (j.contains("weight")) {
            const auto& w = j["weight"];
            if (w.is_object() && w.contains("bang_bang")) {
                reject_unknown(w, {"bang_bang"}, "weight");
                reject_unknown(w["bang_bang"], {"xi", "delta"}, "weight.bang_bang");
                BangBangSpec spec;
                if (w["bang_bang"].contains("xi")) spec.xi = number(w["bang_bang"]["xi"], "weight.bang_bang.xi");
                if (w["bang_bang"].contains("delta"))
                    spec.delta = number(w["bang_bang"]["delta"], "weight.bang_bang.delta");
                cfg.bang_bang = spec;
            } else {
                cfg.weight = weight_from_json(w);
            }
        }
        if (j.contains("betas")) {
            cfg.betas = parse_betas(j["betas"]);
            cfg.betas_given = true;
        }
        if (j.contains("grid_n")) {
            if (!j["grid_n"].is_number_integer() || j["grid_n"].get<long long>() < 1) throw ConfigError("grid_n must be a positive integer");
            cfg.grid_n = j["grid_n"].get<std::size_t>();
        }
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            if (!t.is_object()) throw ConfigError("tolerances must be a JSON object");
            const auto& names = tolerance_names();
            for (const auto& [key, v] : t.items()) {
                if (std::find(names.begin(), names.end(), key) == names.end())
                    throw ConfigError("unknown tolerance '" + key + "'");
                cfg.tolerances[key] = number(v, "tolerances." + key);
            }
        }
        if (j.contains("output")) {
            if (!j["output"].is_string()) throw ConfigError("output must be a string");
            cfg.output = j["output"].get<std::string>();
        }
        if (j.contains("seed")) {
            const auto& s = j["seed"];
            if (s.is_string()) cfg.seed = parse_seed(s.get<std::string>());
            else if (s.is_number_integer() && s.get<long long>() >= 0) cfg.seed = s.get<std::uint64_t>();
            else throw ConfigError("seed must be a hex string or a nonnegative integer");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments) {
    for (const auto& entry : assignments) {
        std::stringstream ss(entry);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ConfigError("--params entry '" + item + "' is not key=value");
            const auto key = item.substr(0, eq);
            const std::string_view value = std::string_view(item).substr(eq + 1);
            if (key == "alpha") cfg.params.alpha = parse_number(value, key);
            else if (key == "kappa") cfg.params.kappa = parse_number(value, key);
            else if (key == "m0") cfg.params.m0 = parse_number(value, key);
            else if (key == "beta") set_beta(cfg, value);
            else if (key == "xi" || key == "delta") {
                if (!cfg.bang_bang) cfg.bang_bang = BangBangSpec{};
                cfg.weight.reset();
                if (key == "xi") cfg.bang_bang->xi = parse_number(value, key);
                else cfg.bang_bang->delta = parse_number(value, key);
            } else {
                throw ConfigError("unknown --params key '" + key + "'");
            }
        }
    }
}

std::uint64_t parse_seed(const std::string& text) {
    std::string_view s = text;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("seed '" + text + "' is not a hexadecimal integer");
    return v;
}

void validate(const RunConfig& cfg) {
    try {
        cfg.params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    if (cfg.grid_n < 2 || cfg.grid_n > kMaxCells) throw ConfigError("grid_n must lie in [2, 2000000]");
    if (cfg.bang_bang) {
        const double d = cfg.delta();
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("bang_bang delta must lie in (0, 1)");
        if (!(cfg.bang_bang->xi >= 0.0 && cfg.bang_bang->xi <= 1.0 - d))
            throw ConfigError("bang_bang xi must lie in [0, 1 - delta]");
    }
    if (cfg.weight && std::abs(cfg.weight->length() - 1.0) > 1e-12)
        throw ConfigError("weight must be defined on (0, 1)");
    for (const auto& [name, v] : cfg.tolerances)
        if (!(v > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
    if (cfg.betas_given) {
        if (cfg.betas.empty()) throw ConfigError("beta grid is empty");
        for (std::size_t i = 0; i < cfg.betas.size(); ++i) {
            if (!(cfg.betas[i] > 0.0)) throw ConfigError("betas must be positive");
            if (i > 0 && !(cfg.betas[i] > cfg.betas[i - 1])) throw ConfigError("betas must be strictly increasing");
        }
    }
}

int cmd_eig(const RunConfig& cfg, std::ostream& out) {
    const auto m = cfg.resolved_weight();
    const auto r = principal_eigenvalue(m, cfg.params, cfg.boundary, cfg.grid_n, cfg.solver_options());
    if (is_zero_regime(r)) {
        json meta{{"lambda", 0.0},
                  {"zero_regime", true},
                  {"exp_mass", std::get<ZeroRegime>(r).exp_mass},
                  {"beta", 0.0},
                  {"alpha", cfg.params.alpha},
                  {"kappa", cfg.params.kappa},
                  {"m0", cfg.params.m0},
                  {"n", cfg.grid_n}};
        write_json(cfg.output / "eig.json", meta);
        out << "lambda=0 (zero regime)\n";
        return kOk;
    }
    const auto& pair = expect_pair(r);
    auto meta = eigenpair_metadata(pair, cfg.params, cfg.boundary, cfg.grid_n);
    meta["zero_regime"] = false;
    write_atomic(cfg.output / "eig.csv", eigenpair_csv(pair));
    write_json(cfg.output / "eig.json", meta);
    out << "lambda=" << format_double(pair.lambda) << "\n";
    return kOk;
}

int cmd_root(const RunConfig& cfg, std::ostream& out) {
    const auto spec = require_bang_bang(cfg, "root");
    const TranscendParams tp{cfg.params, cfg.delta(), cfg.boundary};
    if (cfg.boundary.is_dirichlet() && spec.xi != 0.0)
        throw ConfigError("root with a Dirichlet boundary covers xi = 0 only");
    const double lambda = transcendental_root(spec.xi, tp);
    const double bc = beta_crit(tp);

    json j{{"lambda", lambda},
           {"beta_crit", bc},
           {"xi", spec.xi},
           {"delta", tp.delta},
           {"params", params_json(cfg.params)},
           {"boundary", boundary_json(cfg.boundary)}};
    const double center = 0.5 * (1.0 - tp.delta);
    if (!cfg.boundary.is_dirichlet() && (spec.xi == 0.0 || spec.xi == center)) {
        try {
            const auto eq = regime_equations(spec.xi == 0.0 ? RegimeForm::Boundary : RegimeForm::Centered,
                                             cfg.boundary.beta(), lambda, tp);
            j["regime_residual"] = std::abs(eq.lhs - eq.rhs) / std::max(1.0, std::abs(eq.lhs));
        } catch (const DomainError&) {
        }
    }
    write_json(cfg.output / "root.json", j);
    out << "lambda=" << format_double(lambda) << "\n";
    out << "beta_crit=" << format_double(bc) << "\n";
    return kOk;
}

int cmd_locate(const RunConfig& cfg, std::ostream& out) {
    const auto spec = require_bang_bang(cfg, "locate");
    const auto opts = cfg.design_options();
    // A fixed interval length optimizes position only; otherwise the full design.
    const auto opt = cfg.bang_bang && spec.delta
                         ? locate_optimal_interval(cfg.boundary, *spec.delta, cfg.params, opts.locate)
                         : solve_design(cfg.boundary, cfg.params, opts);
    auto j = optimum_to_json(opt);
    j["params"] = params_json(cfg.params);
    write_json(cfg.output / "locate.json", j);
    out << "xi_star=" << format_double(opt.xi_star) << "\n";
    out << "delta=" << format_double(opt.delta) << "\n";
    out << "lambda_star=" << format_double(opt.lambda_star) << "\n";
    out << "regime=" << regime_name(opt.regime) << "\n";
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.betas_given) throw ConfigError("sweep needs \"betas\" in the config");
    const auto sweep = sweep_beta(cfg.betas, cfg.params, cfg.sweep_options());
    write_atomic(cfg.output / "sweep.csv", sweep_csv(sweep));
    write_atomic(cfg.output / "sweep.dat", sweep_plot_data(sweep));

    json errors = json::array();
    json dirichlet = nullptr;
    for (const auto& r : sweep.rows) {
        if (!r.ok) errors.push_back({{"beta", format_double(r.beta)}, {"error", r.error}});
        else if (!std::isfinite(r.beta))
            dirichlet = {{"lambda_star", r.lambda_star}, {"xi_star", r.xi_star}, {"regime", regime_name(r.regime)}};
    }
    json j{{"params", params_json(cfg.params)},
           {"delta_star", cfg.params.delta_star()},
           {"beta_crit", beta_crit(cfg.params, cfg.params.delta_star())},
           {"switch_beta", sweep.switch_beta ? json(*sweep.switch_beta) : json(nullptr)},
           {"dirichlet", dirichlet},
           {"rows", sweep.rows.size()},
           {"failures", sweep.failures},
           {"errors", errors}};
    write_json(cfg.output / "sweep.json", j);

    out << "rows=" << sweep.rows.size() << " failures=" << sweep.failures << "\n";
    if (sweep.switch_beta) out << "switch_beta=" << format_double(*sweep.switch_beta) << "\n";
    return sweep.failures > 0 ? kPartialSweep : kOk;
}

int cmd_rearrange(const RunConfig& cfg, std::ostream& out) {
    const auto m = cfg.resolved_weight();
    const auto r = unimodal_rearrangement(m, cfg.params, cfg.boundary, cfg.grid_n);
    const double lambda_r = principal_lambda(r.m_R, cfg.params, cfg.boundary, cfg.grid_n);
    json j{{"weight", weight_to_json(m)},
           {"rearranged", weight_to_json(r.m_R)},
           {"m_tilde", weight_to_json(r.m_tilde)},
           {"m_tilde_rearranged", weight_to_json(r.m_tilde_R)},
           {"x_plus", r.x_plus},
           {"y_plus", r.y_plus},
           {"lambda", r.lambda},
           {"lambda_rearranged", lambda_r},
           {"unimodal", is_unimodal(r.m_R)}};
    if (r.warning) j["warning"] = *r.warning;
    write_json(cfg.output / "rearrange.json", j);
    out << "lambda=" << format_double(r.lambda) << "\n";
    out << "lambda_rearranged=" << format_double(lambda_r) << "\n";
    if (r.warning) out << "warning: " << *r.warning << "\n";
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const auto report = run_verify(cfg);
    write_json(cfg.output / "verify.json", report_to_json(report));
    for (const auto& p : report.properties)
        out << (p.passed ? "PASS " : "FAIL ") << p.name << " margin=" << format_double(p.margin) << "\n";
    return report.passed() ? kOk : kVerifyFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Principal eigenvalue optimization for a logistic model with advection"};
    app.name("resopt");
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path, out_dir, seed_text;
    std::size_t n = 0;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--n", n, "Uniform grid cells");
    app.add_option("--seed", seed_text, "Seed for randomized checks (hex)");
    app.add_option("--params", overrides, "Overrides key=value (alpha, kappa, m0, beta, xi, delta)")
        ->allow_extra_args(false);

    using Command = int (*)(const RunConfig&, std::ostream&);
    const std::vector<std::pair<std::string, Command>> commands{
        {"eig", cmd_eig},         {"root", cmd_root},           {"locate", cmd_locate},
        {"sweep", cmd_sweep},     {"rearrange", cmd_rearrange}, {"verify", cmd_verify},
    };
    const std::map<std::string, std::string> help{
        {"eig", "Principal eigenpair of a weight"},
        {"root", "Closed-form eigenvalue of an interval weight and the critical Robin coefficient"},
        {"locate", "Optimal interval position (or full design without delta)"},
        {"sweep", "Optimal eigenvalue over a grid of Robin coefficients"},
        {"rearrange", "Unimodal rearrangement of a weight"},
        {"verify", "Property battery with a pass/fail report"},
    };
    for (const auto& [name, _] : commands) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    std::string command;
    Command fn = nullptr;
    for (const auto& [name, f] : commands)
        if (app.got_subcommand(name)) {
            command = name;
            fn = f;
        }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        apply_overrides(cfg, overrides);
        if (n != 0) cfg.grid_n = n;
        if (!seed_text.empty()) cfg.seed = parse_seed(seed_text);
        if (!out_dir.empty()) cfg.output = out_dir;
        validate(cfg);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        return fn(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << command << " failed: " << e.what() << "\n";
        json j{{"command", command}, {"error", error_kind(e)}, {"message", e.what()}};
        if (const auto* be = dynamic_cast<const BracketError*>(&e)) {
            json samples = json::array();
            for (const auto& [x, f] : be->samples()) samples.push_back({x, f});
            j["samples"] = samples;
        }
        try {
            write_json(cfg.output / "error.json", j);
        } catch (const std::exception& io) {
            err << "cannot write error.json: " << io.what() << "\n";
        }
        return kSolverError;
    }
}

}  // namespace resopt::cli
