#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resopt/eigensolve.hpp"
#include "resopt/transcend.hpp"
#include "resopt/weights.hpp"

namespace resopt {

enum class Regime { BoundaryLeft, BoundaryRight, Centered, Degenerate, Interior };

const char* regime_name(Regime r);

struct DesignOptimum {
    double xi_star = 0.0;
    double delta = 0.0;
    double lambda_star = 0.0;
    Regime regime = Regime::Degenerate;
    bool mass_active = true;
    Boundary boundary = Boundary::neumann();
    double beta_crit = 0.0;  ///< +inf for Dirichlet
    double objective_spread = 0.0;  ///< (max - min) / min of the objective over the xi-grid
    std::optional<double> anchor_gap;  ///< Dirichlet only: |eigensolve(xi=0) - dirichlet_root| / root

    PiecewiseWeight weight(const ModelParams& params) const;
};

struct LocateOptions {
    std::size_t xi_grid = 64;
    double xi_tol = 1e-8;
    double degenerate_band = 1e-9;
    double endpoint_rel_tol = 1e-10;  ///< endpoint accepted if within this of the refined minimum
    std::size_t dirichlet_cells = 1000;  ///< graded cells per extrapolated Dirichlet solve
};

/// Objective lambda_1 of (kappa+1) chi_(xi, xi+delta) - 1.
double interval_objective(double xi, double delta, const ModelParams& params, const Boundary& bc,
                          const LocateOptions& opts = {});

/// Minimizes the objective over xi in [0, (1-delta)/2]. DomainError unless
/// alpha < min(1/2, abar(params)).
DesignOptimum locate_optimal_interval(const Boundary& bc, double delta, const ModelParams& params,
                                      const LocateOptions& opts = {});

/// Predicate under which the mass constraint is guaranteed active: beta below
/// beta_crit(alpha, delta*), or alpha < sinh^2(b xi*) / (1 + 2 sinh^2(b xi*))
/// with b = beta_crit(1/2, delta*) and xi* = (kappa + m0) / (2 (1 + kappa)).
bool active_constraint_condition(const ModelParams& params, const Boundary& bc);

/// Right-hand side of the alpha bound in active_constraint_condition.
double active_constraint_alpha_bound(const ModelParams& params);

struct DesignOptions {
    LocateOptions locate;
    std::size_t mass_grid = 32;
    double mass_tol = 1e-6;
};

/// Optimal bang-bang design: delta pinned to delta* when the mass
/// constraint is known to be active, otherwise optimized over the resource
/// amount m~0 in [m0, 1).
DesignOptimum solve_design(const Boundary& bc, const ModelParams& params, const DesignOptions& opts = {});

struct SweepRow {
    double beta = 0.0;  ///< +inf for the Dirichlet reference row
    double lambda_star = 0.0;
    double xi_star = 0.0;
    double delta = 0.0;
    Regime regime = Regime::Degenerate;
    bool mass_active = true;
    bool ok = true;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< one per beta, then the Dirichlet row
    std::optional<double> switch_beta;  ///< refined BoundaryLeft -> Centered transition
    std::size_t failures = 0;
};

struct SweepOptions {
    DesignOptions design;
    double switch_tol = 1e-4;
    bool include_dirichlet = true;
};

/// One optimum per beta (sorted, positive); failures are recorded per row.
SweepResult sweep_beta(const std::vector<double>& betas, const ModelParams& params, const SweepOptions& opts = {});

std::vector<double> log_space(double lo, double hi, std::size_t count);

struct SwitchSample {
    std::vector<double> x;    ///< element midpoints
    std::vector<double> psi;  ///< alpha phi'^2 - lambda (alpha m + 1) phi^2
};

SwitchSample switch_function(const EigenPair& pair, const PiecewiseWeight& m, const ModelParams& params);

/// psi0 at x = 0 or x = 1, with phi' taken from the boundary condition.
double switch_function_at_boundary(const EigenPair& pair, const PiecewiseWeight& m, const ModelParams& params,
                                   const Boundary& bc, bool right_end);

struct MollifyPoint {
    double width;
    double lambda;
};

/// Weight of the optimum with every interior jump replaced by a 32-step
/// staircase ramp of the given width centred on the jump.
PiecewiseWeight mollified_weight(const DesignOptimum& opt, const ModelParams& params, double width,
                                 std::size_t steps = 32);

/// Extrapolated eigenvalue of each mollified weight; width 0 gives the optimum itself.
std::vector<MollifyPoint> mollify_demo(const DesignOptimum& opt, const std::vector<double>& widths,
                                       const ModelParams& params, std::size_t n = kDefaultCells);

}  // namespace resopt
