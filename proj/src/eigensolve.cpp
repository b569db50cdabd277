#include "resopt/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "resopt/error.hpp"
#include "resopt/rearrange.hpp"
#include "tridiag.hpp"

namespace resopt {

using detail::SymTridiag;

Discretization Discretization::uniform_with(std::size_t n, std::span<const double> breakpoints) {
    if (n == 0) throw DomainError("discretization needs at least one cell");
    if (breakpoints.size() < 2) throw DomainError("need at least two breakpoints");
    const double L = breakpoints.back();
    const double h = L / static_cast<double>(n);
    std::vector<double> nodes(breakpoints.begin(), breakpoints.end());
    for (std::size_t i = 1; i < n; ++i) {
        const double x = L * static_cast<double>(i) / static_cast<double>(n);
        const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
        double gap = std::numeric_limits<double>::infinity();
        if (it != breakpoints.end()) gap = std::min(gap, *it - x);
        if (it != breakpoints.begin()) gap = std::min(gap, x - *(it - 1));
        if (gap > 0.05 * h) nodes.push_back(x);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return Discretization{std::move(nodes)};
}

Discretization Discretization::for_weight(const PiecewiseWeight& m, std::size_t n) {
    return uniform_with(n, m.breakpoints());
}

Discretization Discretization::graded(std::span<const double> breakpoints, std::size_t n, std::size_t refine) {
    if (n == 0 || refine == 0) throw DomainError("discretization needs at least one cell");
    if (breakpoints.size() < 2) throw DomainError("need at least two breakpoints");
    const double L = breakpoints.back();
    std::vector<double> nodes{breakpoints.front()};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        const auto base = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (b - a) / L - 1e-9));
        const std::size_t k = std::max<std::size_t>(1, base) * refine;
        for (std::size_t j = 1; j < k; ++j)
            nodes.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(k));
        nodes.push_back(b);
    }
    return Discretization{std::move(nodes)};
}

namespace {

Forms::Band to_band(SymTridiag t) { return {std::move(t.diag), std::move(t.off)}; }
SymTridiag to_tri(const Forms::Band& b) { return {b.diag, b.off}; }

ElementData element_data(std::span<const double> breakpoints, std::span<const double> stiffness,
                         std::span<const double> weight, const Discretization& disc) {
    const auto& nodes = disc.nodes;
    const double L = breakpoints.back();
    const double tol = 1e-14 * std::max(1.0, L);
    if (std::abs(nodes.front() - breakpoints.front()) > tol || std::abs(nodes.back() - L) > tol)
        throw AssemblyError("discretization does not span the coefficient domain");
    for (double b : breakpoints) {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), b - tol);
        if (it == nodes.end() || std::abs(*it - b) > tol) {
            std::ostringstream os;
            os << "breakpoint " << b << " is not a node of the discretization";
            throw AssemblyError(os.str());
        }
    }
    ElementData e;
    const std::size_t ne = nodes.size() - 1;
    e.h.resize(ne);
    e.p.resize(ne);
    e.w.resize(ne);
    std::size_t piece = 0;
    for (std::size_t k = 0; k < ne; ++k) {
        const double mid = 0.5 * (nodes[k] + nodes[k + 1]);
        while (piece + 1 < stiffness.size() && mid >= breakpoints[piece + 1]) ++piece;
        e.h[k] = nodes[k + 1] - nodes[k];
        e.p[k] = stiffness[piece];
        e.w[k] = weight[piece];
    }
    return e;
}

// Row-form quadratic evaluations that avoid forming K x: the stiffness part
// is summed over element differences, which keeps the cancellation out.
struct QuadForms {
    double stiff;
    double weighted;
    double plain;
};

QuadForms quad_forms(const Forms& f, std::span<const double> full) {
    const auto& e = f.elements;
    QuadForms q{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < e.h.size(); ++k) {
        const double a = full[k], b = full[k + 1];
        const double d = b - a;
        const double sq = (a * a + a * b + b * b) / 3.0;
        q.stiff += e.p[k] * d * d / e.h[k];
        q.weighted += e.w[k] * e.h[k] * sq;
        q.plain += e.h[k] * sq;
    }
    if (!f.boundary.is_dirichlet()) {
        const double beta = f.boundary.beta();
        q.stiff += beta * (full.front() * full.front() + full.back() * full.back());
    }
    return q;
}

std::vector<double> to_full(const Forms& f, std::span<const double> v) {
    std::vector<double> full(f.nodes.size(), 0.0);
    std::copy(v.begin(), v.end(), full.begin() + static_cast<std::ptrdiff_t>(f.first_node()));
    return full;
}

// Eigenvalues of (K - lambda B, M) below mu, moving the probe on breakdown.
long count_below(const SymTridiag& K, const SymTridiag& B, const SymTridiag& M, double lambda, double& mu) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        const long c = detail::negative_pivots(K, -lambda, B, -mu, M);
        if (c >= 0) return c;
        mu += 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mu));
    }
    throw Error("repeated factorization breakdown in inertia count");
}

// Inverse iteration on shifted matrix s with right-hand side rhs_form * x.
std::vector<double> inverse_iterate(const SymTridiag& s, const SymTridiag& rhs_form, std::vector<double> x,
                                    int iterations) {
    std::vector<double> y(x.size());
    for (int it = 0; it < iterations; ++it) {
        const auto rhs = detail::multiply(rhs_form, x);
        if (!detail::solve(s, rhs, y)) throw Error("singular shifted matrix in inverse iteration");
        double nrm = std::sqrt(detail::dot(y, y));
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw Error("inverse iteration diverged");
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] / nrm;
    }
    return x;
}

}  // namespace

Forms assemble_coefficients(std::span<const double> breakpoints, std::span<const double> stiffness,
                            std::span<const double> weight, const Boundary& bc, const Discretization& disc) {
    if (stiffness.size() + 1 != breakpoints.size() || weight.size() != stiffness.size())
        throw AssemblyError("coefficient arrays do not match the breakpoints");
    Forms f;
    f.nodes = disc.nodes;
    f.boundary = bc;
    f.elements = element_data(breakpoints, stiffness, weight, disc);
    const auto& e = f.elements;

    const std::size_t nn = f.nodes.size();
    SymTridiag K{std::vector<double>(nn, 0.0), std::vector<double>(nn - 1, 0.0)};
    SymTridiag B = K, M = K;
    for (std::size_t k = 0; k + 1 < nn; ++k) {
        const double kk = e.p[k] / e.h[k];
        K.diag[k] += kk;
        K.diag[k + 1] += kk;
        K.off[k] -= kk;
        const double bb = e.w[k] * e.h[k] / 6.0;
        B.diag[k] += 2.0 * bb;
        B.diag[k + 1] += 2.0 * bb;
        B.off[k] += bb;
        const double mm = e.h[k] / 6.0;
        M.diag[k] += 2.0 * mm;
        M.diag[k + 1] += 2.0 * mm;
        M.off[k] += mm;
    }
    if (bc.is_dirichlet()) {
        if (nn < 3) throw AssemblyError("Dirichlet problem needs an interior node");
        auto strip = [nn](SymTridiag& t) {
            t.diag = std::vector<double>(t.diag.begin() + 1, t.diag.end() - 1);
            t.off = std::vector<double>(t.off.begin() + 1, t.off.end() - 1);
            (void)nn;
        };
        strip(K);
        strip(B);
        strip(M);
    } else {
        K.diag.front() += bc.beta();
        K.diag.back() += bc.beta();
    }
    f.stiffness = to_band(std::move(K));
    f.weighted_mass = to_band(std::move(B));
    f.mass = to_band(std::move(M));
    return f;
}

Forms assemble(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
               const Discretization& disc) {
    std::vector<double> p(m.pieces()), w(m.pieces());
    for (std::size_t i = 0; i < m.pieces(); ++i) {
        const double v = m.values()[i];
        p[i] = std::exp(params.alpha * v);
        w[i] = v * p[i];
    }
    return assemble_coefficients(m.breakpoints(), p, w, bc, disc);
}

double mu_of_lambda(const Forms& forms, double lambda) {
    const SymTridiag K = to_tri(forms.stiffness);
    const SymTridiag B = to_tri(forms.weighted_mass);
    const SymTridiag M = to_tri(forms.mass);
    const SymTridiag A = detail::combine(K, -lambda, B);
    const std::size_t n = forms.unknowns();
    auto count = [&](double& mu) { return count_below(K, B, M, lambda, mu); };

    // Upper bound from the Rayleigh quotient of the constant vector.
    std::vector<double> ones(n, 1.0);
    double hi = detail::dot(ones, detail::multiply(A, ones)) / detail::dot(ones, detail::multiply(M, ones));
    double step = 1e-8 * std::max(1.0, std::abs(hi));
    hi += step;
    while (count(hi) == 0) {
        step *= 2.0;
        hi += step;
    }
    double width = std::max(1.0, std::abs(hi));
    double lo = hi - width;
    while (count(lo) > 0) {
        width *= 2.0;
        lo = hi - width;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
        if (count(mid) == 0) lo = mid; else hi = mid;
    }

    // Polish: one eigenvector by inverse iteration just below the bracket,
    // then its Rayleigh quotient evaluated in difference form. The inertia
    // count only resolves mu to about eps * ||K||, the quotient to eps * |mu|-scale.
    const double shift = lo - (hi - lo) - 1e-10 * std::max(1.0, std::abs(lo));
    const SymTridiag S = detail::combine(A, -shift, M);
    std::vector<double> v(n, 1.0);
    try {
        v = inverse_iterate(S, M, std::move(v), 3);
    } catch (const Error&) {
        return 0.5 * (lo + hi);
    }
    const auto full = to_full(forms, v);
    const auto q = quad_forms(forms, full);
    const double rq = (q.stiff - lambda * q.weighted) / q.plain;
    const double slack = 1e-6 * std::max(1.0, std::abs(hi));
    if (rq < lo - slack || rq > hi + slack) return 0.5 * (lo + hi);
    return rq;
}

double mu_of_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                    const Discretization& disc, double lambda) {
    return mu_of_lambda(assemble(m, params, bc, disc), lambda);
}

std::vector<MuCurvePoint> mu_curve(const Forms& forms, std::span<const double> lambdas) {
    std::vector<MuCurvePoint> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) out.push_back({l, mu_of_lambda(forms, l)});
    return out;
}

EigenResult solve_forms(const Forms& forms, double weight_exp_mass, const SolverOptions& opts) {
    const SymTridiag K = to_tri(forms.stiffness);
    const SymTridiag B = to_tri(forms.weighted_mass);
    const SymTridiag M = to_tri(forms.mass);

    const bool neumann = forms.boundary.is_neumann();
    if (neumann && weight_exp_mass >= 0.0) return ZeroRegime{weight_exp_mass};

    // mu(lambda) < 0 exactly when K - lambda B has a negative eigenvalue.
    auto mu_negative = [&](double lambda) {
        double zero = 0.0;
        return count_below(K, B, M, lambda, zero) > 0;
    };

    // With Neumann ends mu(0) = 0 and mu'(0) = -exp_mass > 0, so mu is
    // positive just right of the origin; the bracket starts there.
    double lo = neumann ? opts.neumann_start : 0.0;
    double hi = 1.0;
    std::vector<double> probes;
    while (!mu_negative(hi)) {
        probes.push_back(hi);
        lo = hi;
        hi *= 2.0;
        if (hi > opts.lambda_max) {
            std::vector<std::pair<double, double>> samples;
            for (double l : probes) samples.emplace_back(l, mu_of_lambda(forms, l));
            throw BracketError("no sign change of mu(lambda) below lambda_max", std::move(samples));
        }
    }
    auto bisect_to = [&](double rel) {
        while (hi - lo > rel * hi) {
            const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (mu_negative(mid)) hi = mid; else lo = mid;
        }
    };
    auto eigenvector_at = [&](double shift) {
        std::vector<double> v(forms.unknowns(), 1.0);
        v = inverse_iterate(detail::combine(K, -shift, B), M, std::move(v), opts.inverse_iterations);
        double sum = 0.0;
        for (double c : v) sum += c;
        if (sum < 0.0)
            for (auto& c : v) c = -c;
        return v;
    };

    // Inertia counts resolve lambda only to about eps * cond(K) / dmu/dlambda,
    // which at fine grids sits above the requested tolerance; the Rayleigh
    // quotient of the inverse-iteration vector is accurate to rounding and
    // replaces the bracket midpoint when it lies in a 1e-6 window around it.
    bisect_to(opts.lambda_rel_tol);
    const auto v = eigenvector_at(hi * (1.0 + opts.inverse_shift));
    auto full = to_full(forms, v);
    const auto q = quad_forms(forms, full);
    double lambda = 0.5 * (lo + hi);
    if (q.weighted > 0.0) {
        const double rq = q.stiff / q.weighted;
        if (std::abs(rq - lambda) <= 1e-6 * lambda) lambda = rq;
    }

    const double scale = 1.0 / std::sqrt(std::abs(q.weighted));
    for (auto& c : full) c *= scale;
    std::vector<double> w(v);
    for (auto& c : w) c *= scale;

    const auto Kv = detail::multiply(K, w);
    const auto Bv = detail::multiply(B, w);
    double rnum = 0.0, rden = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = Kv[i] - lambda * Bv[i];
        rnum += r * r;
        rden += Kv[i] * Kv[i];
    }

    EigenPair pair;
    pair.lambda = lambda;
    pair.x = forms.nodes;
    pair.phi = std::move(full);
    pair.residual = rden > 0.0 ? std::sqrt(rnum / rden) : 0.0;
    pair.phi_max = *std::max_element(pair.phi.begin(), pair.phi.end());
    return pair;
}

EigenResult principal_eigenvalue(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                                 const Discretization& disc, const SolverOptions& opts) {
    params.validate();
    return solve_forms(assemble(m, params, bc, disc), exp_mass(m, params.alpha), opts);
}

EigenResult principal_eigenvalue(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                                 std::size_t n, const SolverOptions& opts) {
    return principal_eigenvalue(m, params, bc, Discretization::for_weight(m, n), opts);
}

double principal_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                        std::size_t n) {
    const auto r = principal_eigenvalue(m, params, bc, n);
    return is_zero_regime(r) ? 0.0 : std::get<EigenPair>(r).lambda;
}

double graded_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc, std::size_t n,
                     std::size_t refine) {
    const auto r = principal_eigenvalue(m, params, bc, Discretization::graded(m.breakpoints(), n, refine));
    return is_zero_regime(r) ? 0.0 : std::get<EigenPair>(r).lambda;
}

double extrapolated_lambda(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                           std::size_t n) {
    const double coarse = graded_lambda(m, params, bc, n, 1);
    const double fine = graded_lambda(m, params, bc, n, 2);
    return (4.0 * fine - coarse) / 3.0;
}

EigenResult eigen_cov(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                      std::size_t n, const SolverOptions& opts) {
    params.validate();
    const auto cov = change_of_variable_forward(m, params.alpha);
    const auto& mt = cov.m_tilde;
    std::vector<double> p(mt.pieces(), 1.0), w(mt.pieces());
    for (std::size_t i = 0; i < mt.pieces(); ++i) {
        const double v = mt.values()[i];
        w[i] = v * std::exp(2.0 * params.alpha * v);
    }
    const auto ydisc = Discretization::for_weight(mt, n);
    const auto forms = assemble_coefficients(mt.breakpoints(), p, w, bc, ydisc);
    // int m~ e^{2 alpha m~} dy = int m e^{alpha m} dx decides the Neumann regime.
    auto result = solve_forms(forms, exp_mass(m, params.alpha), opts);
    if (is_zero_regime(result)) return result;

    auto& ypair = std::get<EigenPair>(result);
    // phi(x) = u(c(x)); the weighted normalization carries over unchanged.
    const auto xdisc = Discretization::for_weight(m, n);
    EigenPair pair;
    pair.lambda = ypair.lambda;
    pair.residual = ypair.residual;
    pair.x = xdisc.nodes;
    pair.phi.resize(pair.x.size());
    const auto& yn = ypair.x;
    for (std::size_t i = 0; i < pair.x.size(); ++i) {
        const double y = std::clamp(cov.forward(pair.x[i]), 0.0, yn.back());
        auto it = std::upper_bound(yn.begin(), yn.end(), y);
        std::size_t k = it == yn.begin() ? 0 : static_cast<std::size_t>(it - yn.begin()) - 1;
        if (k + 1 >= yn.size()) k = yn.size() - 2;
        const double t = (y - yn[k]) / (yn[k + 1] - yn[k]);
        pair.phi[i] = (1.0 - t) * ypair.phi[k] + t * ypair.phi[k + 1];
    }
    pair.phi_max = *std::max_element(pair.phi.begin(), pair.phi.end());
    return pair;
}

bool is_zero_regime(const EigenResult& r) { return std::holds_alternative<ZeroRegime>(r); }

const EigenPair& expect_pair(const EigenResult& r) {
    if (const auto* p = std::get_if<EigenPair>(&r)) return *p;
    throw Error("expected a positive principal eigenvalue, got the zero regime");
}

EigenPair expect_pair(EigenResult&& r) { return expect_pair(static_cast<const EigenResult&>(r)); }

}  // namespace resopt
