#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resopt/cli.hpp"
#include "resopt/error.hpp"
#include "resopt/transcend.hpp"

using namespace resopt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "resopt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("resopt_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

fs::path write_config(const fs::path& dir, const json& j) {
    const auto path = dir / "config.json";
    std::ofstream(path) << j.dump();
    return path;
}

double value_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 1));
}

// Keys and value types, with arrays reduced to the schema of their first element.
json schema_of(const json& j) {
    if (j.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : j.items()) out[k] = schema_of(v);
        return out;
    }
    if (j.is_array()) return j.empty() ? json::array() : json::array({schema_of(j.front())});
    if (j.is_boolean()) return "boolean";
    if (j.is_number()) return "number";
    if (j.is_string()) return "string";
    return "null";
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys") {
    CHECK_THROWS_AS(cli::parse_config(json{{"nope", 1}}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"params", {{"alpha", 0.1}, {"gamma", 1}}}}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"tolerances", {{"made_up", 1e-3}}}}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"boundary", {{"kind", "periodic"}}}}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"weight", {{"bang_bang", {{"xi", 0.1}, {"width", 2}}}}}}), ConfigError);
}

TEST_CASE("config parsing reads every section") {
    const json j = {{"params", {{"alpha", 0.2}, {"kappa", 2.0}, {"m0", 0.3}}},
                    {"boundary", {{"kind", "robin"}, {"beta", 4.0}}},
                    {"weight", {{"bang_bang", {{"xi", 0.1}, {"delta", 0.2}}}}},
                    {"betas", {{"log_space", {{"min", 0.1}, {"max", 10.0}, {"count", 5}}}}},
                    {"grid_n", 500},
                    {"tolerances", {{"xi_tol", 1e-6}}},
                    {"output", "somewhere"},
                    {"seed", "0x1f"}};
    const auto cfg = cli::parse_config(j);
    CHECK(cfg.params.kappa == 2.0);
    CHECK(cfg.boundary.beta() == 4.0);
    CHECK(cfg.delta() == 0.2);
    CHECK(cfg.betas.size() == 5);
    CHECK(cfg.grid_n == 500);
    CHECK(cfg.design_options().locate.xi_tol == 1e-6);
    CHECK(cfg.output == "somewhere");
    CHECK(cfg.seed == 0x1f);
    CHECK_NOTHROW(cli::validate(cfg));
}

TEST_CASE("parameter overrides") {
    cli::RunConfig cfg;
    cli::apply_overrides(cfg, {"alpha=0.3,kappa=2", "beta=inf", "xi=0.1"});
    CHECK(cfg.params.alpha == 0.3);
    CHECK(cfg.params.kappa == 2.0);
    CHECK(cfg.boundary.is_dirichlet());
    CHECK(cfg.bang_bang->xi == 0.1);
    CHECK_THROWS_AS(cli::apply_overrides(cfg, {"omega=1"}), ConfigError);
    CHECK_THROWS_AS(cli::apply_overrides(cfg, {"alpha=abc"}), ConfigError);
    cli::apply_overrides(cfg, {"m0=1.5"});
    CHECK_THROWS_AS(cli::validate(cfg), ConfigError);
}

TEST_CASE("seed parsing") {
    CHECK(cli::parse_seed("0xE16E") == 0xE16E);
    CHECK(cli::parse_seed("e16e") == 0xE16E);
    CHECK_THROWS_AS(cli::parse_seed("0xZZ"), ConfigError);
    CHECK_THROWS_AS(cli::parse_seed(""), ConfigError);
}

TEST_CASE("eig prints pi^2 for a constant Dirichlet weight") {
    const auto dir = scratch("eig_pi");
    const auto cfg = write_config(dir, {{"params", {{"alpha", 0.0}}},
                                        {"boundary", {{"kind", "dirichlet"}}},
                                        {"weight", {{"breakpoints", {0.0, 1.0}}, {"values", {1.0}}}}});
    const auto r = run_cli({"eig", "--config", cfg.string(), "--out", (dir / "out").string(), "--n", "2000"});
    CHECK(r.code == 0);
    CHECK(std::abs(value_after(r.out, "lambda") - 9.8696) < 1e-3);
    CHECK(fs::exists(dir / "out" / "eig.csv"));
    const auto meta = json::parse(slurp(dir / "out" / "eig.json"));
    CHECK(meta["beta"] == "dirichlet");
    CHECK(slurp(dir / "out" / "eig.csv").rfind("x,phi\n", 0) == 0);
}

TEST_CASE("eig reports the zero regime") {
    const auto dir = scratch("eig_zero");
    const auto cfg = write_config(dir, {{"weight", {{"breakpoints", {0.0, 1.0}}, {"values", {1.0}}}}});
    const auto r = run_cli({"eig", "--config", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "lambda=0 (zero regime)\n");
}

TEST_CASE("eig and root agree on an interval weight") {
    const auto dir = scratch("eig_root");
    const std::string params = "alpha=0.2,kappa=1,m0=0.4,beta=2,xi=0.15,delta=0.3";
    const auto e = run_cli({"eig", "--params", params, "--out", (dir / "e").string()});
    const auto r = run_cli({"root", "--params", params, "--out", (dir / "r").string()});
    REQUIRE(e.code == 0);
    REQUIRE(r.code == 0);
    const double le = value_after(e.out, "lambda"), lr = value_after(r.out, "lambda");
    CHECK(std::abs(le - lr) / lr < 1e-4);
}

TEST_CASE("root prints the critical coefficient and satisfies the regime identity") {
    const auto dir = scratch("root");
    const auto r = run_cli({"root", "--params", "alpha=0.2,kappa=1,m0=0.4,beta=1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(std::abs(value_after(r.out, "beta_crit") - 3.2232) < 1e-3);
    const auto j = json::parse(slurp(dir / "root.json"));
    CHECK(j["regime_residual"].get<double>() <= 1e-8);

    const auto d = run_cli({"root", "--params", "alpha=0.2,beta=inf,xi=0", "--out", dir.string()});
    REQUIRE(d.code == 0);
    const ModelParams p{0.2, 1.0, 0.4};
    CHECK(value_after(d.out, "lambda") == doctest::Approx(dirichlet_root(TranscendParams{p, 0.3, Boundary::dirichlet()})));
    CHECK(run_cli({"root", "--params", "beta=inf,xi=0.2", "--out", dir.string()}).code == cli::kConfigError);
}

TEST_CASE("locate reports the regime") {
    const auto dir = scratch("locate");
    const auto r = run_cli({"locate", "--params", "alpha=0.2,beta=1,delta=0.3", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("regime=boundary_left") != std::string::npos);
    CHECK(json::parse(slurp(dir / "locate.json"))["regime"] == "boundary_left");
}

TEST_CASE("sweep: empty grid, single row and determinism") {
    const auto dir = scratch("sweep");
    const auto empty = write_config(dir, {{"betas", json::array()}});
    CHECK(run_cli({"sweep", "--config", empty.string()}).code == cli::kConfigError);

    const auto one = write_config(dir, {{"params", {{"alpha", 0.2}}}, {"betas", {2.0}}});
    const auto r = run_cli({"sweep", "--config", one.string(), "--n", "200", "--out", (dir / "one").string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(dir / "one" / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    const auto row = csv.substr(csv.find('\n') + 1);
    const double lam = std::stod(row.substr(row.find(',') + 1));
    const auto e = run_cli({"eig", "--params", "alpha=0.2,beta=2,xi=0,delta=0.3", "--out", (dir / "e").string()});
    CHECK(std::abs(value_after(e.out, "lambda") - lam) / lam < 1e-4);
    CHECK(slurp(dir / "one" / "sweep.dat").rfind("# beta lambda_star\n", 0) == 0);

    const auto several = write_config(dir, {{"params", {{"alpha", 0.2}}}, {"betas", {0.5, 3.0, 6.0}}});
    const auto a = run_cli({"sweep", "--config", several.string(), "--n", "200", "--out", (dir / "a").string()});
    const auto b = run_cli({"sweep", "--config", several.string(), "--n", "200", "--out", (dir / "b").string()});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
    CHECK(slurp(dir / "a" / "sweep.json") == slurp(dir / "b" / "sweep.json"));
}

TEST_CASE("solver failures exit with a diagnostic file") {
    const auto dir = scratch("solver_error");
    const auto cfg = write_config(dir, {{"boundary", {{"kind", "dirichlet"}}},
                                        {"weight", {{"breakpoints", {0.0, 1.0}}, {"values", {-1.0}}}}});
    const auto r = run_cli({"eig", "--config", cfg.string(), "--n", "50", "--out", dir.string()});
    CHECK(r.code == cli::kSolverError);
    const auto j = json::parse(slurp(dir / "error.json"));
    CHECK(j["command"] == "eig");
    CHECK(j["error"] == "BracketError");
    CHECK_FALSE(j["samples"].empty());
}

TEST_CASE("command-line errors") {
    CHECK(run_cli({}).code == cli::kConfigError);
    CHECK(run_cli({"frobnicate"}).code == cli::kConfigError);
    CHECK(run_cli({"eig", "--config", "/nonexistent/config.json"}).code == cli::kConfigError);
    CHECK(run_cli({"eig", "--seed", "xyz"}).code == cli::kConfigError);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("verify report: default pass, coarse grid fails, stable schema") {
    const auto dir = scratch("verify");
    const auto ok = run_cli({"verify", "--out", (dir / "ok").string()});
    CHECK(ok.code == 0);
    const auto report = json::parse(slurp(dir / "ok" / "verify.json"));
    CHECK(report["seed"] == "0xe16e");
    CHECK(report["passed"] == true);

    const auto golden = json::parse(slurp(fs::path(RESOPT_TEST_DATA) / "verify_schema.json"));
    CHECK(schema_of(report) == golden);

    const auto bad = run_cli({"verify", "--n", "8", "--out", (dir / "bad").string()});
    CHECK(bad.code != 0);
    const auto r2 = json::parse(slurp(dir / "bad" / "verify.json"));
    CHECK(r2["grid_n"] == 8);
    bool found = false;
    for (const auto& p : r2["properties"])
        if (p["name"] == "discretization_agreement") {
            found = true;
            CHECK(p["passed"] == false);
            CHECK(p["margin"].get<double>() < 0.0);
        }
    CHECK(found);
    CHECK(schema_of(r2) == golden);

    const auto again = run_cli({"verify", "--seed", "0x1234", "--out", (dir / "seeded").string()});
    CHECK(json::parse(slurp(dir / "seeded" / "verify.json"))["seed"] == "0x1234");
    (void)again;
}

TEST_CASE("verify property names are fixed") {
    cli::RunConfig cfg;
    cfg.grid_n = 400;
    const auto report = cli::run_verify(cfg);
    std::vector<std::string> names;
    for (const auto& p : report.properties) names.push_back(p.name);
    CHECK(names == std::vector<std::string>{"discretization_agreement", "neumann_zero_regime",
                                            "rearrangement_monotonicity", "equimeasurability", "mu_concavity",
                                            "mu_at_zero_positive", "trichotomy", "mollify_demo"});
}
