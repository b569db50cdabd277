#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "resopt/weights.hpp"

namespace resopt {

/// Grid on [0, L]: n uniform cells merged with every coefficient breakpoint,
/// so that each element sees constant coefficients.
struct Discretization {
    std::vector<double> nodes;

    /// Uniform nodes closer than 5% of a cell to a breakpoint are dropped in
    /// favour of the breakpoint.
    static Discretization uniform_with(std::size_t n, std::span<const double> breakpoints);
    static Discretization for_weight(const PiecewiseWeight& m, std::size_t n);
    /// Each piece of length l split into refine * max(1, ceil(n l / L)) equal
    /// cells, so refine = 2 halves every cell of refine = 1.
    static Discretization graded(std::span<const double> breakpoints, std::size_t n, std::size_t refine = 1);

    std::size_t cells() const { return nodes.size() - 1; }
    double length() const { return nodes.back(); }
};

/// Constant-per-element data of a Sturm-Liouville problem
/// -(p u')' = lambda w u with Robin/Dirichlet ends.
struct ElementData {
    std::vector<double> h;  ///< element lengths
    std::vector<double> p;  ///< stiffness coefficient
    std::vector<double> w;  ///< indefinite weight
};

/// Tridiagonal P1 forms. With Dirichlet ends the endpoint unknowns are
/// eliminated and unknown i corresponds to node i + 1.
struct Forms {
    struct Band {
        std::vector<double> diag;
        std::vector<double> off;
    };
    Band stiffness;      ///< int p u'v' + beta boundary products
    Band weighted_mass;  ///< int w u v
    Band mass;           ///< int u v
    std::vector<double> nodes;
    ElementData elements;
    Boundary boundary = Boundary::neumann();

    std::size_t unknowns() const { return stiffness.diag.size(); }
    std::size_t first_node() const { return boundary.is_dirichlet() ? 1 : 0; }
};

/// Forms for -(e^{alpha m} phi')' = lambda m e^{alpha m} phi on (0, 1).
/// Throws AssemblyError if a breakpoint of m is not a node of disc.
Forms assemble(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
               const Discretization& disc);

/// Forms for arbitrary piecewise-constant coefficients given per weight piece.
Forms assemble_coefficients(std::span<const double> breakpoints, std::span<const double> stiffness,
                            std::span<const double> weight, const Boundary& bc,
                            const Discretization& disc);

/// Smallest eigenvalue mu of (K - lambda B) v = mu M v.
double mu_of_lambda(const Forms& forms, double lambda);

double mu_of_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                    const Discretization& disc, double lambda);

struct MuCurvePoint {
    double lambda;
    double mu;
};

std::vector<MuCurvePoint> mu_curve(const Forms& forms, std::span<const double> lambdas);

enum class Normalization { WeightedUnit };  ///< int m e^{alpha m} phi^2 = 1

struct EigenPair {
    double lambda = 0.0;
    std::vector<double> x;    ///< nodes, endpoints included
    std::vector<double> phi;  ///< eigenfunction at the nodes
    double residual = 0.0;    ///< ||K phi - lambda B phi|| / ||K phi||
    double phi_max = 0.0;
    Normalization normalization = Normalization::WeightedUnit;
};

/// Neumann case with int m e^{alpha m} >= 0: zero is the only nonnegative
/// principal eigenvalue.
struct ZeroRegime {
    double exp_mass = 0.0;
};

using EigenResult = std::variant<EigenPair, ZeroRegime>;

struct SolverOptions {
    double lambda_rel_tol = 1e-10;
    double lambda_max = 1e8;
    double neumann_start = 1e-8;
    double inverse_shift = 1e-10;  ///< relative shift of the inverse iteration
    int inverse_iterations = 4;
};

/// Default number of uniform cells.
inline constexpr std::size_t kDefaultCells = 2000;

EigenResult solve_forms(const Forms& forms, double weight_exp_mass, const SolverOptions& opts = {});

/// Positive principal eigenvalue through the root of mu(lambda) = 0.
EigenResult principal_eigenvalue(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                                 const Discretization& disc, const SolverOptions& opts = {});

EigenResult principal_eigenvalue(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                                 std::size_t n = kDefaultCells, const SolverOptions& opts = {});

/// Eigenvalue only; 0 in the zero regime.
double principal_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                        std::size_t n = kDefaultCells);

/// Eigenvalue on Discretization::graded(m, n, refine); 0 in the zero regime.
double graded_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc, std::size_t n,
                     std::size_t refine);

/// Richardson extrapolation (4 lambda_2 - lambda_1) / 3 from graded grids
/// with refine = 1 and refine = 2.
double extrapolated_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                           std::size_t n = kDefaultCells);

/// Same eigenvalue through the change of variable y = int_0^x e^{-alpha m}:
/// -u'' = lambda m~ e^{2 alpha m~} u on (0, c(1)). The eigenfunction is
/// mapped back onto the x-grid of Discretization::for_weight(m, n).
EigenResult eigen_cov(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                      std::size_t n = kDefaultCells, const SolverOptions& opts = {});

bool is_zero_regime(const EigenResult& r);
const EigenPair& expect_pair(const EigenResult& r);
EigenPair expect_pair(EigenResult&& r);

}  // namespace resopt
