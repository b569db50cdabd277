#include "resopt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "resopt/error.hpp"

namespace resopt {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::json weight_to_json(const PiecewiseWeight& m) {
    return {{"breakpoints", std::vector<double>(m.breakpoints().begin(), m.breakpoints().end())},
            {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

PiecewiseWeight weight_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("weight must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (key != "breakpoints" && key != "values") throw ConfigError("unknown weight key '" + key + "'");
    if (!j.contains("breakpoints") || !j.contains("values"))
        throw ConfigError("weight needs 'breakpoints' and 'values'");
    try {
        return PiecewiseWeight(j.at("breakpoints").get<std::vector<double>>(),
                               j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed weight: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid weight: ") + e.what());
    }
}

std::string eigenpair_csv(const EigenPair& pair) {
    std::string out = "x,phi\n";
    for (std::size_t i = 0; i < pair.x.size(); ++i) {
        out += format_double(pair.x[i]);
        out += ',';
        out += format_double(pair.phi[i]);
        out += '\n';
    }
    return out;
}

nlohmann::json eigenpair_metadata(const EigenPair& pair, const ModelParams& params, const Boundary& bc,
                                  std::size_t n) {
    nlohmann::json j;
    j["lambda"] = pair.lambda;
    j["beta"] = bc.is_dirichlet() ? nlohmann::json("dirichlet") : nlohmann::json(bc.beta());
    j["alpha"] = params.alpha;
    j["kappa"] = params.kappa;
    j["m0"] = params.m0;
    j["n"] = n;
    j["residual"] = pair.residual;
    j["phi_max"] = pair.phi_max;
    j["normalization"] = "int m e^(alpha m) phi^2 = 1";
    return j;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::string out = "beta,lambda_star,xi_star,regime,mass_active\n";
    for (const auto& r : sweep.rows) {
        if (!std::isfinite(r.beta)) continue;
        out += format_double(r.beta);
        out += ',';
        out += r.ok ? format_double(r.lambda_star) : "nan";
        out += ',';
        out += r.ok ? format_double(r.xi_star) : "nan";
        out += ',';
        out += r.ok ? regime_name(r.regime) : "error";
        out += ',';
        out += r.ok ? (r.mass_active ? "true" : "false") : "nan";
        out += '\n';
    }
    return out;
}

std::string sweep_plot_data(const SweepResult& sweep) {
    std::string out = "# beta lambda_star\n";
    for (const auto& r : sweep.rows) {
        if (!r.ok || !std::isfinite(r.beta)) continue;
        out += format_double(r.beta);
        out += ' ';
        out += format_double(r.lambda_star);
        out += '\n';
    }
    return out;
}

nlohmann::json optimum_to_json(const DesignOptimum& opt) {
    nlohmann::json j;
    j["xi_star"] = opt.xi_star;
    j["delta"] = opt.delta;
    j["lambda_star"] = opt.lambda_star;
    j["regime"] = regime_name(opt.regime);
    j["mass_active"] = opt.mass_active;
    j["boundary"] = opt.boundary.describe();
    j["beta_crit"] = std::isfinite(opt.beta_crit) ? nlohmann::json(opt.beta_crit) : nlohmann::json("inf");
    j["objective_spread"] = opt.objective_spread;
    if (opt.anchor_gap) j["anchor_gap"] = *opt.anchor_gap;
    return j;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw Error("failed to write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace resopt
