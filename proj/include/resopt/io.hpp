#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "resopt/eigensolve.hpp"
#include "resopt/optimize.hpp"
#include "resopt/weights.hpp"

namespace resopt {

/// Shortest decimal form that reads back to the same double; "inf", "-inf", "nan" otherwise.
std::string format_double(double v);

nlohmann::json weight_to_json(const PiecewiseWeight& m);
/// ConfigError on missing or unknown keys.
PiecewiseWeight weight_from_json(const nlohmann::json& j);

/// Columns x, phi.
std::string eigenpair_csv(const EigenPair& pair);
nlohmann::json eigenpair_metadata(const EigenPair& pair, const ModelParams& params, const Boundary& bc,
                                  std::size_t n);

/// Columns beta, lambda_star, xi_star, regime, mass_active, one row per
/// finite beta. Failed rows carry nan and regime "error".
std::string sweep_csv(const SweepResult& sweep);
/// Two whitespace-separated columns beta, lambda_star over the finite rows.
std::string sweep_plot_data(const SweepResult& sweep);

nlohmann::json optimum_to_json(const DesignOptimum& opt);

/// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace resopt
