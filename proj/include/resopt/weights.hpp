#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace resopt {

/// Problem constants: advection rate, upper resource bound and mass bound.
struct ModelParams {
    double alpha = 0.0;
    double kappa = 1.0;
    double m0 = 0.4;

    /// Throws DomainError unless alpha >= 0, kappa > 0 and 0 < m0 < 1.
    void validate() const;

    /// Length of the favourable interval of a bang-bang weight with mass -m0.
    double delta_star() const { return (1.0 - m0) / (kappa + 1.0); }
};

/// Robin coefficient in [0, inf]. Neumann is Robin(0), Dirichlet the beta = inf limit.
class Boundary {
public:
    enum class Kind { Robin, Dirichlet };

    static Boundary robin(double beta);
    static Boundary neumann() { return robin(0.0); }
    static Boundary dirichlet() { return Boundary(Kind::Dirichlet, std::numeric_limits<double>::infinity()); }

    Kind kind() const { return kind_; }
    bool is_dirichlet() const { return kind_ == Kind::Dirichlet; }
    bool is_neumann() const { return kind_ == Kind::Robin && beta_ == 0.0; }
    /// Robin coefficient; +inf for Dirichlet.
    double beta() const { return beta_; }

    std::string describe() const;

private:
    Boundary(Kind kind, double beta) : kind_(kind), beta_(beta) {}

    Kind kind_;
    double beta_;
};

/// Piecewise-constant function on (0, L). For resource weights L = 1; the
/// change of variable produces weights on (0, c(1)).
class PiecewiseWeight {
public:
    /// Throws DomainError unless breakpoints start at 0, increase strictly and
    /// there is exactly one more breakpoint than values.
    PiecewiseWeight(std::vector<double> breakpoints, std::vector<double> values);

    static PiecewiseWeight constant(double value, double length = 1.0);

    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> values() const { return values_; }
    std::size_t pieces() const { return values_.size(); }
    double length() const { return breakpoints_.back(); }
    double piece_length(std::size_t i) const { return breakpoints_[i + 1] - breakpoints_[i]; }

    /// Index of the piece containing x (right-continuous, last piece at x = L).
    std::size_t piece_at(double x) const;

    /// Same function with adjacent equal values fused into one piece.
    PiecewiseWeight merged() const;

    double min_value() const;
    double max_value() const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// The two-parameter family (kappa + 1) chi_(xi, xi + delta) - 1.
struct BangBangInterval {
    double xi = 0.0;
    double delta = 0.5;
    ModelParams params;

    void validate() const;
    PiecewiseWeight weight() const;
};

double eval(const PiecewiseWeight& m, double x);

/// Exact integral of m over its domain.
double mass(const PiecewiseWeight& m);

/// Exact integral of m e^{alpha m}.
double exp_mass(const PiecewiseWeight& m, double alpha);

/// Exact integral of m^2 e^{alpha m}, the alpha-derivative of exp_mass.
double exp_mass_derivative(const PiecewiseWeight& m, double alpha);

/// Upper end of the bracket searched by alpha_star.
inline constexpr double kAlphaStarBracket = 64.0;

/// Unique root of alpha -> exp_mass(m, alpha). Returns +inf when m has no
/// positive part or no root lies in [0, kAlphaStarBracket]; returns 0 when
/// exp_mass(m, 0) >= 0.
double alpha_star(const PiecewiseWeight& m);

/// Uniform advection threshold: (1/(1+kappa)) ln((kappa+m0)/(kappa(1-m0))).
double abar(const ModelParams& params);

enum class AdmissibilityFailure { None, Domain, LowerBound, UpperBound, Mass, NoPositivePart };

struct Admissibility {
    bool ok = true;
    AdmissibilityFailure failure = AdmissibilityFailure::None;
    std::string reason;

    explicit operator bool() const { return ok; }
};

/// Slack absorbed when testing the mass constraint.
inline constexpr double kMassSlack = 1e-12;

/// Membership in the admissible class: -1 <= m <= kappa, mass <= -m0 and a
/// positive part of positive length, on the unit interval.
Admissibility is_admissible(const PiecewiseWeight& m, const ModelParams& params);

struct ExpMassMaximum {
    PiecewiseWeight weight;
    double value;
    std::vector<std::size_t> level_counts;  // cells assigned to each level
};

/// Exhaustive maximization of exp_mass over weights constant on `cells`
/// uniform cells with values drawn from `levels`, subject to the bounds and
/// mass <= -m0. Limited to cells <= 12 and at most 4 levels (SizeError).
ExpMassMaximum brute_force_expmass_max(const ModelParams& params, std::size_t cells,
                                       std::span<const double> levels);

}  // namespace resopt
