#pragma once

#include <vector>

#include "resopt/weights.hpp"

namespace resopt {

/// Parameters of the closed-form problem for m = (kappa+1) chi_(xi, xi+delta) - 1.
struct TranscendParams {
    ModelParams params;
    double delta = 0.5;
    Boundary boundary = Boundary::neumann();

    void validate() const;
};

struct FComponents {
    double F_s;
    double F_c;
    double F;
};

/// F^s, F^c and F = -F^s sin(sqrt(lambda kappa) delta)
///                 + sqrt(kappa) e^{alpha(kappa+1)} F^c cos(sqrt(lambda kappa) delta).
FComponents F_components(double xi, double beta, double lambda, const TranscendParams& tp);

/// F multiplied by e^{-sqrt(lambda)(1-delta)}; same sign as F, finite for large lambda.
double F_scaled(double xi, double beta, double lambda, const TranscendParams& tp);

/// d F / d sqrt(lambda) at lambda = 0:
/// sqrt(kappa) delta b^2 + sqrt(kappa) e^{alpha(kappa+1)} b (b (1-delta) + 2), b = beta e^alpha.
double F_slope_at_zero(double beta, const TranscendParams& tp);

/// First positive root of F(xi, beta, .). The scan runs in sqrt(lambda) up to
/// pi / (sqrt(kappa) delta); the sign change from + to - is bisected to
/// relative width 1e-13 in sqrt(lambda). BracketError if F never turns negative.
double transcendental_root(double xi, double beta, const TranscendParams& tp);

/// Root with the boundary taken from tp: Robin via transcendental_root,
/// Dirichlet via dirichlet_root (xi = 0 only).
double transcendental_root(double xi, const TranscendParams& tp);

/// First positive root of tan(sqrt(lambda kappa) delta) = -sqrt(kappa) e^{alpha(kappa+1)} tanh(sqrt(lambda)(1-delta)).
double dirichlet_root(const TranscendParams& tp);

/// Critical Robin coefficient at which the optimal interval leaves the boundary.
double beta_crit(const ModelParams& params, double delta);
double beta_crit(const TranscendParams& tp);

enum class RegimeForm { Boundary, Centered };

struct RegimeEquation {
    RegimeForm form;
    double lhs;  ///< tan(sqrt(lambda kappa) delta)
    double rhs;
};

/// The tan(...) = ... identity for xi = 0 (tanh form) or the centered
/// interval (form with denominator D). Throws DomainError within 1e-12 of a pole.
RegimeEquation regime_equations(RegimeForm form, double beta, double lambda, const TranscendParams& tp);

/// Form chosen from the sign of beta - beta_crit; DomainError if equal.
RegimeEquation regime_equations(double beta, double lambda, const TranscendParams& tp);

/// -(1/2)(lambda - b^2)(kappa e^{2 alpha (kappa+1)} + 1)(cosh(sqrt(lambda)(1-delta)) - 1).
double delta_diag(double beta, double lambda, const TranscendParams& tp);

/// Explicit eigenfunction: hyperbolic on (0, xi) and (xi+delta, 1),
/// trigonometric C cos + D sin on the interval, with phi(xi) = A = 1 and
/// phi(xi+delta) = B.
struct ClosedFormEigenfunction {
    double A = 1.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double xi = 0.0;
    double lambda = 0.0;
    double beta = 0.0;
    TranscendParams tp;
    double det_residual = 0.0;   ///< |det M| / (|m11 m22| + |m12 m21|)
    double jump_residual = 0.0;  ///< flux-jump mismatch relative to the derivative scale

    double operator()(double x) const;
    double derivative(double x) const;
    std::vector<double> sample(const std::vector<double>& x) const;
};

/// Builds the eigenfunction at a root lambda of F(xi, beta, .). RankError
/// when both rows of M vanish.
ClosedFormEigenfunction closed_form_eigenfunction(double xi, double beta, double lambda, const TranscendParams& tp);

}  // namespace resopt
