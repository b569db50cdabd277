#include "resopt/transcend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "resopt/error.hpp"

namespace resopt {

namespace {

constexpr double kPi = std::numbers::pi;

struct Consts {
    double k;  // sqrt(kappa)
    double E;  // e^{alpha(kappa+1)}
    double Q;  // kappa E^2
    double delta;
};

Consts consts(const TranscendParams& tp) {
    const auto& p = tp.params;
    const double E = std::exp(p.alpha * (p.kappa + 1.0));
    return {std::sqrt(p.kappa), E, p.kappa * E * E, tp.delta};
}

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and nonnegative");
}

// F with every hyperbolic term multiplied by e^{-s(1-delta)}.
double F_scaled_s(double xi, double b, double s, const Consts& c) {
    const double u = s * (1.0 - c.delta);
    const double w = s * std::abs(1.0 - 2.0 * xi - c.delta);
    const double e2u = std::exp(-2.0 * u);
    const double sh = 0.5 * (1.0 - e2u);
    const double ch = 0.5 * (1.0 + e2u);
    const double chw = 0.5 * (std::exp(w - u) + std::exp(-w - u));
    const double lam = s * s;
    const double Fs = b * s * (c.Q - 1.0) * sh + 0.5 * (1.0 + c.Q) * (lam - b * b) * chw +
                      0.5 * (c.Q - 1.0) * (b * b + lam) * ch;
    const double Fc = (lam + b * b) * sh + 2.0 * b * s * ch;
    const double a = s * c.k * c.delta;
    return -Fs * std::sin(a) + c.k * c.E * Fc * std::cos(a);
}

template <class G>
double first_sign_change(G&& g, double s_lo, double s_hi, double step0, const char* what) {
    std::vector<std::pair<double, double>> samples;
    double a = s_lo;
    double ga = g(a);
    samples.emplace_back(a * a, ga);
    if (!(ga > 0.0)) {
        std::ostringstream os;
        os << what << ": function is not positive at the start of the scan";
        throw BracketError(os.str(), std::move(samples));
    }
    while (a < s_hi) {
        const double b = std::min(s_hi, a + step0 * (1.0 + a));
        const double gb = g(b);
        samples.emplace_back(b * b, gb);
        if (gb <= 0.0) {
            if (gb == 0.0) return b;
            double lo = a, hi = b;
            while (hi - lo > 1e-13 * hi) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (g(mid) > 0.0) lo = mid; else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        a = b;
    }
    std::ostringstream os;
    os << what << ": no sign change below sqrt(lambda) = " << s_hi;
    throw BracketError(os.str(), std::move(samples));
}

}  // namespace

void TranscendParams::validate() const {
    params.validate();
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("interval length must lie in (0, 1)");
}

FComponents F_components(double xi, double beta, double lambda, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const auto c = consts(tp);
    const double s = std::sqrt(lambda);
    const double b = beta * std::exp(tp.params.alpha);
    const double u = s * (1.0 - c.delta);
    const double Fs = b * s * (c.Q - 1.0) * std::sinh(u) +
                      0.5 * (1.0 + c.Q) * (lambda - b * b) * std::cosh(s * (1.0 - 2.0 * xi - c.delta)) +
                      0.5 * (c.Q - 1.0) * (b * b + lambda) * std::cosh(u);
    const double Fc = (lambda + b * b) * std::sinh(u) + 2.0 * b * s * std::cosh(u);
    const double a = s * c.k * c.delta;
    return {Fs, Fc, -Fs * std::sin(a) + c.k * c.E * Fc * std::cos(a)};
}

double F_scaled(double xi, double beta, double lambda, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    return F_scaled_s(xi, beta * std::exp(tp.params.alpha), std::sqrt(lambda), consts(tp));
}

double F_slope_at_zero(double beta, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    const auto c = consts(tp);
    const double b = beta * std::exp(tp.params.alpha);
    return c.k * c.delta * b * b + c.k * c.E * b * (b * (1.0 - c.delta) + 2.0);
}

double transcendental_root(double xi, double beta, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    if (!(xi >= 0.0 && xi <= 1.0 - tp.delta)) throw DomainError("xi must lie in [0, 1 - delta]");
    const auto c = consts(tp);
    const double b = beta * std::exp(tp.params.alpha);
    const double s_hi = kPi / (c.k * c.delta);
    const double step = std::min(0.01, kPi / (8.0 * c.k * c.delta));
    const double s = first_sign_change([&](double t) { return F_scaled_s(xi, b, t, c); }, 1e-4, s_hi, step,
                                       "transcendental_root");
    return s * s;
}

double transcendental_root(double xi, const TranscendParams& tp) {
    if (tp.boundary.is_dirichlet()) {
        if (xi != 0.0) throw DomainError("the Dirichlet closed form covers xi = 0 only");
        return dirichlet_root(tp);
    }
    return transcendental_root(xi, tp.boundary.beta(), tp);
}

double dirichlet_root(const TranscendParams& tp) {
    tp.validate();
    const auto c = consts(tp);
    auto g = [&](double s) {
        const double a = s * c.k * c.delta;
        return std::sin(a) + c.k * c.E * std::tanh(s * (1.0 - c.delta)) * std::cos(a);
    };
    // g > 0 while the angle is at most pi/2; g(pi) = -kE tanh < 0.
    double lo = 0.5 * kPi / (c.k * c.delta);
    double hi = kPi / (c.k * c.delta);
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0.0) lo = mid; else hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    return s * s;
}

double beta_crit(const ModelParams& params, double delta) {
    params.validate();
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("interval length must lie in (0, 1)");
    const double k = std::sqrt(params.kappa);
    const double E = std::exp(params.alpha * (params.kappa + 1.0));
    const double Q = params.kappa * E * E;
    const double scale = std::exp(-params.alpha) / (k * delta);
    if (Q == 1.0) return 0.5 * kPi * scale;
    const double base = scale * std::atan(2.0 * k * E / (Q - 1.0));
    return Q > 1.0 ? base : base + kPi * scale;
}

double beta_crit(const TranscendParams& tp) { return beta_crit(tp.params, tp.delta); }

RegimeEquation regime_equations(RegimeForm form, double beta, double lambda, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const auto c = consts(tp);
    const double s = std::sqrt(lambda);
    const double b = beta * std::exp(tp.params.alpha);
    const double a = s * c.k * c.delta;
    if (std::abs(std::cos(a)) < 1e-12) throw DomainError("probe lies on a pole of tan");
    const double lhs = std::tan(a);
    const double u = s * (1.0 - c.delta);
    double rhs;
    if (form == RegimeForm::Boundary) {
        const double th = std::tanh(u);
        rhs = c.k * c.E * ((lambda + b * b) * th + 2.0 * b * s) /
              (b * s * (c.Q - 1.0) * th + (lambda * c.Q - b * b));
    } else {
        // Numerator and denominator both scaled by e^{-u}.
        const double e2u = std::exp(-2.0 * u);
        const double sh = 0.5 * (1.0 - e2u), ch = 0.5 * (1.0 + e2u), eu = std::exp(-u);
        const double Fc = (lambda + b * b) * sh + 2.0 * b * s * ch;
        const double D = 0.5 * (c.Q - 1.0) * (b * b + lambda) * ch + b * s * (c.Q - 1.0) * sh +
                         0.5 * (1.0 + c.Q) * (lambda - b * b) * eu;
        rhs = c.k * c.E * Fc / D;
    }
    return {form, lhs, rhs};
}

RegimeEquation regime_equations(double beta, double lambda, const TranscendParams& tp) {
    const double bc = beta_crit(tp);
    if (beta == bc) throw DomainError("regime equations are undefined at the critical coefficient");
    return regime_equations(beta < bc ? RegimeForm::Boundary : RegimeForm::Centered, beta, lambda, tp);
}

double delta_diag(double beta, double lambda, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const auto c = consts(tp);
    const double b = beta * std::exp(tp.params.alpha);
    return -0.5 * (lambda - b * b) * (c.Q + 1.0) * (std::cosh(std::sqrt(lambda) * (1.0 - c.delta)) - 1.0);
}

namespace {

struct Pieces {
    double s, t, b;
};

Pieces pieces_of(const ClosedFormEigenfunction& f) {
    return {std::sqrt(f.lambda), std::sqrt(f.lambda * f.tp.params.kappa), f.beta * std::exp(f.tp.params.alpha)};
}

double left_profile(const Pieces& p, double x) { return p.s * std::cosh(p.s * x) + p.b * std::sinh(p.s * x); }
double left_slope(const Pieces& p, double x) {
    return p.s * (p.s * std::sinh(p.s * x) + p.b * std::cosh(p.s * x));
}
double right_profile(const Pieces& p, double x) {
    return p.s * std::cosh(p.s * (x - 1.0)) - p.b * std::sinh(p.s * (x - 1.0));
}
double right_slope(const Pieces& p, double x) {
    return p.s * (p.s * std::sinh(p.s * (x - 1.0)) - p.b * std::cosh(p.s * (x - 1.0)));
}

}  // namespace

double ClosedFormEigenfunction::operator()(double x) const {
    const auto p = pieces_of(*this);
    const double right = xi + tp.delta;
    if (x < xi) return A * left_profile(p, x) / left_profile(p, xi);
    if (x > right) return B * right_profile(p, x) / right_profile(p, right);
    return C * std::cos(p.t * x) + D * std::sin(p.t * x);
}

double ClosedFormEigenfunction::derivative(double x) const {
    const auto p = pieces_of(*this);
    const double right = xi + tp.delta;
    if (x < xi) return A * left_slope(p, x) / left_profile(p, xi);
    if (x > right) return B * right_slope(p, x) / right_profile(p, right);
    return p.t * (-C * std::sin(p.t * x) + D * std::cos(p.t * x));
}

std::vector<double> ClosedFormEigenfunction::sample(const std::vector<double>& x) const {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
    return out;
}

ClosedFormEigenfunction closed_form_eigenfunction(double xi, double beta, double lambda, const TranscendParams& tp) {
    tp.validate();
    check_beta(beta);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (!(xi >= 0.0 && xi <= 1.0 - tp.delta)) throw DomainError("xi must lie in [0, 1 - delta]");

    ClosedFormEigenfunction f;
    f.xi = xi;
    f.lambda = lambda;
    f.beta = beta;
    f.tp = tp;
    const auto c = consts(tp);
    const auto p = pieces_of(f);
    const double sn = std::sin(p.t * tp.delta), cs = std::cos(p.t * tp.delta);
    const double y = xi + tp.delta - 1.0;

    const double P = p.s * std::cosh(p.s * xi) + p.b * std::sinh(p.s * xi);
    const double Pd = p.s * std::sinh(p.s * xi) + p.b * std::cosh(p.s * xi);
    const double R = p.s * std::cosh(p.s * y) - p.b * std::sinh(p.s * y);
    const double Rd = p.s * std::sinh(p.s * y) - p.b * std::cosh(p.s * y);

    const double m11 = c.k * c.E * P * cs + Pd * sn;
    const double m12 = -c.k * c.E * P;
    const double m21 = -c.k * c.E * R;
    const double m22 = c.k * c.E * R * cs - Rd * sn;

    const double det_scale = std::abs(m11 * m22) + std::abs(m12 * m21);
    f.det_residual = det_scale > 0.0 ? std::abs(m11 * m22 - m12 * m21) / det_scale : 0.0;

    // Kernel vector (1, B) from the row whose B-coefficient carries more weight.
    const double n1 = std::abs(m11) + std::abs(m12);
    const double n2 = std::abs(m21) + std::abs(m22);
    const double q1 = n1 > 0.0 ? std::abs(m12) / n1 : 0.0;
    const double q2 = n2 > 0.0 ? std::abs(m22) / n2 : 0.0;
    if (std::max(q1, q2) < 1e-14) throw RankError("both rows of the jump system are degenerate");
    f.A = 1.0;
    f.B = q1 >= q2 ? -m11 / m12 : -m21 / m22;

    const double sa = std::sin(p.t * (xi + tp.delta)), ca = std::cos(p.t * (xi + tp.delta));
    const double sx = std::sin(p.t * xi), cx = std::cos(p.t * xi);
    f.C = (f.A * sa - f.B * sx) / sn;
    f.D = -(f.A * ca - f.B * cx) / sn;

    const double right = xi + tp.delta;
    const double inner_l = p.t * (-f.C * sx + f.D * cx);
    const double inner_r = p.t * (-f.C * sa + f.D * ca);
    const double outer_l = f.A * Pd * p.s / P;
    const double outer_r = f.B * right_slope(p, right) / R;
    const double r1 = c.E * inner_l - outer_l;
    const double r2 = outer_r - c.E * inner_r;
    const double scale = std::max({std::abs(c.E * inner_l), std::abs(outer_l), std::abs(outer_r),
                                   std::abs(c.E * inner_r), p.s * std::max(std::abs(f.A), std::abs(f.B))});
    f.jump_residual = std::max(std::abs(r1), std::abs(r2)) / scale;
    return f;
}

}  // namespace resopt
