#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

struct Piece {
    double length;
    double value;
};

/// Exact transfer of (phi, e^{alpha v} phi') across pieces of constant
/// weight for -(e^{alpha m} phi')' = lambda m e^{alpha m} phi.
inline std::pair<double, double> shoot(const std::vector<Piece>& pieces, double alpha, double lambda, double phi,
                                       double flux) {
    for (const auto& p : pieces) {
        const double a = std::exp(alpha * p.value);
        double d = flux / a;
        const double q = lambda * p.value;
        const double h = p.length;
        double nphi, nd;
        if (q > 0.0) {
            const double k = std::sqrt(q);
            nphi = phi * std::cos(k * h) + d / k * std::sin(k * h);
            nd = -phi * k * std::sin(k * h) + d * std::cos(k * h);
        } else if (q < 0.0) {
            const double k = std::sqrt(-q);
            nphi = phi * std::cosh(k * h) + d / k * std::sinh(k * h);
            nd = phi * k * std::sinh(k * h) + d * std::cosh(k * h);
        } else {
            nphi = phi + d * h;
            nd = d;
        }
        phi = nphi;
        flux = a * nd;
    }
    return {phi, flux};
}

/// Boundary mismatch at x = 1 after shooting from x = 0; beta < 0 means Dirichlet.
/// Scaled by a positive factor so that large lambda stays finite.
inline double boundary_mismatch(const std::vector<Piece>& pieces, double alpha, double beta, double lambda) {
    const bool dirichlet = beta < 0.0;
    const auto [phi, flux] = dirichlet ? shoot(pieces, alpha, lambda, 0.0, 1.0) : shoot(pieces, alpha, lambda, 1.0, beta);
    const double r = dirichlet ? phi : flux + beta * phi;
    const double scale = std::abs(phi) + std::abs(flux);
    return scale > 0.0 ? r / scale : r;
}

/// First sign change of f on (lo, hi] scanned geometrically, then bisected.
inline double first_root(const std::function<double(double)>& f, double lo, double hi, double growth = 1.002) {
    double a = lo, fa = f(a);
    while (a < hi) {
        const double b = std::min(hi, a * growth);
        const double fb = f(b);
        if ((fa > 0.0) != (fb > 0.0)) {
            double l = a, r = b, fl = fa;
            for (int i = 0; i < 200 && r - l > 1e-15 * r; ++i) {
                const double m = 0.5 * (l + r);
                const double fm = f(m);
                if ((fm > 0.0) == (fl > 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            return 0.5 * (l + r);
        }
        a = b;
        fa = fb;
    }
    throw std::runtime_error("oracle: no sign change");
}

/// Smallest positive eigenvalue above lo by shooting.
inline double principal_eigenvalue(const std::vector<Piece>& pieces, double alpha, double beta, double lo = 1e-3,
                                   double hi = 1e5) {
    return first_root([&](double l) { return boundary_mismatch(pieces, alpha, beta, l); }, lo, hi);
}

inline std::vector<Piece> bang_bang(double xi, double delta, double kappa) {
    std::vector<Piece> out;
    if (xi > 0.0) out.push_back({xi, -1.0});
    out.push_back({delta, kappa});
    if (1.0 - xi - delta > 0.0) out.push_back({1.0 - xi - delta, -1.0});
    return out;
}

inline std::vector<Piece> pieces_of(const std::vector<double>& breakpoints, const std::vector<double>& values) {
    std::vector<Piece> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.push_back({breakpoints[i + 1] - breakpoints[i], values[i]});
    return out;
}

inline double integral(const std::vector<Piece>& pieces, const std::function<double(double)>& g) {
    double s = 0.0;
    for (const auto& p : pieces) s += p.length * g(p.value);
    return s;
}

/// First positive root of tan(s) = 2 b s / (s^2 - b^2), written without poles.
inline double robin_constant_root(double b) {
    auto g = [b](double s) { return (s * s - b * b) * std::sin(s) - 2.0 * b * s * std::cos(s); };
    return first_root(g, 1e-6, 2.0 * std::numbers::pi, 1.0005);
}

/// Interval length at which int m e^{alpha m} vanishes for the interval weight.
inline double alpha_star_bang_bang(double delta, double kappa) {
    return std::log((1.0 - delta) / (kappa * delta)) / (kappa + 1.0);
}

/// Critical Robin coefficient from its defining arctangent expression.
inline double beta_crit(double alpha, double kappa, double delta) {
    const double k = std::sqrt(kappa);
    const double E = std::exp(alpha * (kappa + 1.0));
    const double Q = kappa * E * E;
    double angle = std::atan2(2.0 * k * E, Q - 1.0);  // in (0, pi)
    return std::exp(-alpha) * angle / (k * delta);
}

}  // namespace oracle
