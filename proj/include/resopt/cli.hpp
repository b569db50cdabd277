#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resopt/eigensolve.hpp"
#include "resopt/optimize.hpp"
#include "resopt/sampling.hpp"
#include "resopt/weights.hpp"

namespace resopt::cli {

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kConfigError = 2,
    kSolverError = 3,
    kPartialSweep = 4,
};

struct BangBangSpec {
    double xi = 0.0;
    std::optional<double> delta;  ///< delta* of the params when absent
};

struct RunConfig {
    ModelParams params;
    Boundary boundary = Boundary::neumann();
    std::optional<PiecewiseWeight> weight;
    std::optional<BangBangSpec> bang_bang;
    std::vector<double> betas;
    bool betas_given = false;
    std::size_t grid_n = kDefaultCells;
    std::map<std::string, double> tolerances;
    std::filesystem::path output = "resopt_out";
    std::uint64_t seed = kDefaultSeed;

    double delta() const;
    /// Explicit weight, else the bang-bang weight; ConfigError if neither is set.
    PiecewiseWeight resolved_weight() const;
    double tolerance(const std::string& name, double fallback) const;

    SolverOptions solver_options() const;
    DesignOptions design_options() const;
    SweepOptions sweep_options() const;
};

/// Names accepted in the "tolerances" map.
const std::vector<std::string>& tolerance_names();

/// ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Applies "key=value" assignments; each entry may hold several separated by
/// commas. Keys: alpha, kappa, m0, beta (number, "inf" or "dirichlet"), xi, delta.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments);

/// Hex with or without a 0x prefix.
std::uint64_t parse_seed(const std::string& text);

/// Cross-field checks; ConfigError on failure.
void validate(const RunConfig& cfg);

struct PropertyResult {
    std::string name;
    bool passed = false;
    double margin = 0.0;  ///< threshold minus worst measurement; negative on failure
    std::string detail;
};

struct VerifyReport {
    std::uint64_t seed = kDefaultSeed;
    std::size_t grid_n = kDefaultCells;
    std::vector<PropertyResult> properties;

    bool passed() const;
};

VerifyReport run_verify(const RunConfig& cfg);
nlohmann::json report_to_json(const VerifyReport& report);

int cmd_eig(const RunConfig& cfg, std::ostream& out);
int cmd_root(const RunConfig& cfg, std::ostream& out);
int cmd_locate(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_rearrange(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

/// Full command line, argv[0] included. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace resopt::cli
