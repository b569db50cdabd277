#include "resopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "resopt/error.hpp"

namespace resopt {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

// Grid search followed by golden refinement around the best grid point.
struct ScanResult {
    double x;
    double value;
    double spread;
    double first;  // objective at lo
    double last;   // objective at hi
};

template <class F>
ScanResult scan_and_refine(F&& f, double lo, double hi, std::size_t points, double tol) {
    std::vector<double> xs(points), fs(points);
    for (std::size_t i = 0; i < points; ++i) {
        xs[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        fs[i] = f(xs[i]);
    }
    const auto imin = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const double fmax = *std::max_element(fs.begin(), fs.end());
    ScanResult best{xs[imin], fs[imin], (fmax - fs[imin]) / std::abs(fs[imin]), fs.front(), fs.back()};
    if (points < 3) return best;
    const double a = xs[imin == 0 ? 0 : imin - 1];
    const double b = xs[std::min(imin + 1, points - 1)];
    const auto [xg, fg] = golden_min(f, a, b, tol);
    if (fg < best.value) {
        best.x = xg;
        best.value = fg;
    }
    return best;
}

void check_alpha(const ModelParams& params) {
    params.validate();
    if (!(params.alpha < std::min(0.5, abar(params))))
        throw DomainError("alpha must lie below min(1/2, abar)");
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::BoundaryLeft: return "boundary_left";
        case Regime::BoundaryRight: return "boundary_right";
        case Regime::Centered: return "centered";
        case Regime::Degenerate: return "degenerate";
        case Regime::Interior: return "interior";
    }
    return "unknown";
}

PiecewiseWeight DesignOptimum::weight(const ModelParams& params) const {
    return BangBangInterval{xi_star, delta, params}.weight();
}

double interval_objective(double xi, double delta, const ModelParams& params, const Boundary& bc,
                          const LocateOptions& opts) {
    if (bc.is_dirichlet()) {
        const auto m = BangBangInterval{xi, delta, params}.weight();
        return extrapolated_lambda(m, params, bc, opts.dirichlet_cells);
    }
    return transcendental_root(xi, bc.beta(), TranscendParams{params, delta, bc});
}

DesignOptimum locate_optimal_interval(const Boundary& bc, double delta, const ModelParams& params,
                                      const LocateOptions& opts) {
    check_alpha(params);
    const TranscendParams tp{params, delta, bc};
    tp.validate();
    const double center = 0.5 * (1.0 - delta);
    auto f = [&](double xi) { return interval_objective(xi, delta, params, bc, opts); };

    const auto best = scan_and_refine(f, 0.0, center, opts.xi_grid, opts.xi_tol);

    DesignOptimum out;
    out.delta = delta;
    out.boundary = bc;
    out.beta_crit = bc.is_dirichlet() ? std::numeric_limits<double>::infinity() : beta_crit(tp);
    out.objective_spread = best.spread;
    out.xi_star = best.x;
    out.lambda_star = best.value;

    // Near a symmetric optimum the objective is flat to second order, so
    // endpoints are matched by value rather than by position.
    const double slack = opts.endpoint_rel_tol * std::abs(best.value);
    const bool degenerate = !bc.is_dirichlet() && std::abs(bc.beta() - out.beta_crit) <= opts.degenerate_band;
    if (best.first <= best.value + slack && best.first <= best.last) {
        out.xi_star = 0.0;
        out.lambda_star = best.first;
        out.regime = Regime::BoundaryLeft;
    } else if (best.last <= best.value + slack) {
        out.xi_star = center;
        out.lambda_star = best.last;
        out.regime = Regime::Centered;
    } else {
        out.regime = Regime::Interior;
    }
    if (degenerate) out.regime = Regime::Degenerate;

    if (bc.is_dirichlet()) {
        const double root = dirichlet_root(tp);
        out.anchor_gap = std::abs(f(0.0) - root) / root;
    }
    return out;
}

double active_constraint_alpha_bound(const ModelParams& params) {
    params.validate();
    ModelParams half = params;
    half.alpha = 0.5;
    const double b = beta_crit(half, params.delta_star());
    const double xi = (params.kappa + params.m0) / (2.0 * (1.0 + params.kappa));
    const double sh = std::sinh(b * xi);
    return sh * sh / (1.0 + 2.0 * sh * sh);
}

bool active_constraint_condition(const ModelParams& params, const Boundary& bc) {
    params.validate();
    if (!bc.is_dirichlet() && bc.beta() < beta_crit(params, params.delta_star())) return true;
    return params.alpha < active_constraint_alpha_bound(params);
}

DesignOptimum solve_design(const Boundary& bc, const ModelParams& params, const DesignOptions& opts) {
    check_alpha(params);
    if (active_constraint_condition(params, bc)) {
        auto out = locate_optimal_interval(bc, params.delta_star(), params, opts.locate);
        out.mass_active = true;
        return out;
    }
    const double kp1 = params.kappa + 1.0;
    auto f = [&](double mt) {
        return locate_optimal_interval(bc, (1.0 - mt) / kp1, params, opts.locate).lambda_star;
    };
    // Sample [m0, 1) without its open end.
    const std::size_t N = std::max<std::size_t>(2, opts.mass_grid);
    const double hi = params.m0 + (1.0 - params.m0) * static_cast<double>(N - 1) / static_cast<double>(N);
    const auto best = scan_and_refine(f, params.m0, hi, N, opts.mass_tol);
    const bool at_bound = best.first <= best.value + opts.locate.endpoint_rel_tol * std::abs(best.value);
    const double mt = at_bound ? params.m0 : best.x;
    auto out = locate_optimal_interval(bc, (1.0 - mt) / kp1, params, opts.locate);
    out.mass_active = at_bound;
    return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (!(lo > 0.0 && hi >= lo)) throw DomainError("log_space needs 0 < lo <= hi");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

SweepResult sweep_beta(const std::vector<double>& betas, const ModelParams& params, const SweepOptions& opts) {
    if (betas.empty()) throw DomainError("beta grid is empty");
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0) || !std::isfinite(betas[i])) throw DomainError("betas must be positive and finite");
        if (i > 0 && !(betas[i] > betas[i - 1])) throw DomainError("betas must be strictly increasing");
    }
    check_alpha(params);

    auto row_for = [&](const Boundary& bc) {
        SweepRow row;
        row.beta = bc.beta();
        try {
            const auto o = solve_design(bc, params, opts.design);
            row.lambda_star = o.lambda_star;
            row.xi_star = o.xi_star;
            row.delta = o.delta;
            row.regime = o.regime;
            row.mass_active = o.mass_active;
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
        return row;
    };

    SweepResult out;
    for (double b : betas) out.rows.push_back(row_for(Boundary::robin(b)));

    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        const auto& a = out.rows[i];
        const auto& b = out.rows[i + 1];
        if (!a.ok || !b.ok || a.regime != Regime::BoundaryLeft || b.regime != Regime::Centered) continue;
        double lo = a.beta, hi = b.beta;
        while (hi - lo > opts.switch_tol) {
            const double mid = 0.5 * (lo + hi);
            const auto o = solve_design(Boundary::robin(mid), params, opts.design);
            if (o.regime == Regime::Centered) hi = mid; else lo = mid;
        }
        out.switch_beta = 0.5 * (lo + hi);
        break;
    }

    if (opts.include_dirichlet) out.rows.push_back(row_for(Boundary::dirichlet()));
    for (const auto& r : out.rows)
        if (!r.ok) ++out.failures;
    return out;
}

SwitchSample switch_function(const EigenPair& pair, const PiecewiseWeight& m, const ModelParams& params) {
    SwitchSample out;
    const std::size_t ne = pair.x.size() - 1;
    out.x.resize(ne);
    out.psi.resize(ne);
    for (std::size_t k = 0; k < ne; ++k) {
        const double h = pair.x[k + 1] - pair.x[k];
        const double mid = 0.5 * (pair.x[k] + pair.x[k + 1]);
        const double dphi = (pair.phi[k + 1] - pair.phi[k]) / h;
        const double phi = 0.5 * (pair.phi[k] + pair.phi[k + 1]);
        const double mv = eval(m, mid);
        out.x[k] = mid;
        out.psi[k] = params.alpha * dphi * dphi - pair.lambda * (params.alpha * mv + 1.0) * phi * phi;
    }
    return out;
}

double switch_function_at_boundary(const EigenPair& pair, const PiecewiseWeight& m, const ModelParams& params,
                                   const Boundary& bc, bool right_end) {
    const double x = right_end ? 1.0 : 0.0;
    const double mv = eval(m, x);
    const double phi = right_end ? pair.phi.back() : pair.phi.front();
    double dphi;
    if (bc.is_dirichlet()) {
        const std::size_t n = pair.x.size();
        dphi = right_end ? (pair.phi[n - 1] - pair.phi[n - 2]) / (pair.x[n - 1] - pair.x[n - 2])
                         : (pair.phi[1] - pair.phi[0]) / (pair.x[1] - pair.x[0]);
    } else {
        const double flux = bc.beta() * std::exp(-params.alpha * mv) * phi;
        dphi = right_end ? -flux : flux;
    }
    return params.alpha * dphi * dphi - pair.lambda * (params.alpha * mv + 1.0) * phi * phi;
}

PiecewiseWeight mollified_weight(const DesignOptimum& opt, const ModelParams& params, double width,
                                 std::size_t steps) {
    const auto base = opt.weight(params);
    if (width == 0.0) return base;
    if (!(width > 0.0) || steps == 0) throw DomainError("ramp width and step count must be positive");

    struct Jump {
        double at;
        double left;
        double right;
    };
    std::vector<Jump> jumps;
    for (std::size_t i = 1; i < base.pieces(); ++i)
        jumps.push_back({base.breakpoints()[i], base.values()[i - 1], base.values()[i]});
    const double half = 0.5 * width;
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        const double prev = j == 0 ? 0.0 : jumps[j - 1].at + half;
        const double next = j + 1 == jumps.size() ? 1.0 : jumps[j + 1].at - half;
        if (!(jumps[j].at - half > prev && jumps[j].at + half < next))
            throw DomainError("ramp width exceeds the room around a jump");
    }

    auto build = [&](double shift_kappa_side) {
        std::vector<double> bp{0.0};
        std::vector<double> vals;
        for (const auto& J : jumps) {
            // Moving the ramp toward the kappa side shortens the plateau.
            const double dir = J.right > J.left ? 1.0 : -1.0;
            const double start = J.at - half + dir * shift_kappa_side;
            vals.push_back(J.left);
            bp.push_back(start);
            for (std::size_t s = 0; s < steps; ++s) {
                vals.push_back(J.left + (J.right - J.left) * (static_cast<double>(s) + 0.5) /
                                            static_cast<double>(steps));
                bp.push_back(start + width * static_cast<double>(s + 1) / static_cast<double>(steps));
            }
        }
        vals.push_back(jumps.empty() ? base.values().front() : jumps.back().right);
        bp.push_back(1.0);
        return PiecewiseWeight(std::move(bp), std::move(vals)).merged();
    };

    auto m = build(0.0);
    const double excess = mass(m) - mass(base);
    if (excess > 1e-14 && !jumps.empty()) {
        const double shift = excess / ((params.kappa + 1.0) * static_cast<double>(jumps.size()));
        m = build(shift);
    }
    return m;
}

std::vector<MollifyPoint> mollify_demo(const DesignOptimum& opt, const std::vector<double>& widths,
                                       const ModelParams& params, std::size_t n) {
    std::vector<MollifyPoint> out;
    out.reserve(widths.size());
    for (double w : widths) {
        const auto m = mollified_weight(opt, params, w);
        out.push_back({w, extrapolated_lambda(m, params, opt.boundary, n)});
    }
    return out;
}

}  // namespace resopt
