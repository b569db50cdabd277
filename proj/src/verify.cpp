#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "resopt/cli.hpp"
#include "resopt/error.hpp"
#include "resopt/io.hpp"
#include "resopt/rearrange.hpp"
#include "resopt/transcend.hpp"

namespace resopt::cli {

namespace {

// Margin reported when a check threw or failed before measuring.
constexpr double kNoMeasure = -1.0;

struct Check {
    double worst = -std::numeric_limits<double>::infinity();  // largest violation measure seen
    std::string where;

    void see(double v, const std::string& label) {
        if (v > worst) {
            worst = v;
            where = label;
        }
    }
};

std::string describe(const PiecewiseWeight& m) {
    std::ostringstream os;
    os << m.pieces() << " pieces";
    return os.str();
}

PropertyResult discretization_agreement(const RunConfig& cfg) {
    const double tol = cfg.tolerance("agreement_rel_tol", 1e-4);
    const ModelParams p{0.2, 1.0, 0.4};
    const double delta = 0.3;
    Check c;
    for (double beta : {1.0, 5.0}) {
        for (double xi : {0.0, 0.2, 0.35}) {
            const TranscendParams tp{p, delta, Boundary::robin(beta)};
            const double root = transcendental_root(xi, beta, tp);
            const auto m = BangBangInterval{xi, delta, p}.weight();
            const double lam = principal_lambda(m, p, Boundary::robin(beta), cfg.grid_n);
            std::ostringstream os;
            os << "beta=" << beta << " xi=" << xi;
            c.see(std::abs(lam - root) / root, os.str());
        }
    }
    return {"discretization_agreement", c.worst <= tol, tol - c.worst,
            "max relative gap to the closed-form root " + format_double(c.worst) + " at " + c.where};
}

PropertyResult neumann_zero_regime(const RunConfig& cfg) {
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> alpha(0.0, 1.0);
    double min_positive = std::numeric_limits<double>::infinity();
    std::size_t mismatches = 0, zero = 0;
    for (int i = 0; i < 20; ++i) {
        const auto m = random_sign_changing_weight(rng, 1.0);
        const ModelParams p{alpha(rng), 1.0, 0.4};
        const auto r = principal_eigenvalue(m, p, Boundary::neumann(), cfg.grid_n);
        const bool expect_zero = exp_mass(m, p.alpha) >= 0.0;
        if (is_zero_regime(r) != expect_zero) ++mismatches;
        if (is_zero_regime(r)) ++zero;
        else min_positive = std::min(min_positive, expect_pair(r).lambda);
    }
    const double margin = mismatches > 0 ? -static_cast<double>(mismatches) : min_positive;
    std::ostringstream os;
    os << zero << " of 20 in the zero regime, " << mismatches << " misclassified";
    return {"neumann_zero_regime", mismatches == 0 && margin > 0.0, margin, os.str()};
}

struct Sample {
    PiecewiseWeight m;
    ModelParams params;
    Boundary bc;
};

std::vector<Sample> rearrangement_samples(const RunConfig& cfg, std::size_t count) {
    Rng rng(cfg.seed + 1);
    const double alphas[] = {0.0, 0.1, 0.2};
    const Boundary bcs[] = {Boundary::neumann(), Boundary::robin(1.0), Boundary::robin(10.0), Boundary::dirichlet()};
    std::vector<Sample> out;
    for (std::size_t i = 0; i < count; ++i) {
        ModelParams p{alphas[i % 3], 1.0, 0.4};
        out.push_back({random_admissible_weight(rng, p), p, bcs[(i / 3) % 4]});
    }
    return out;
}

PropertyResult rearrangement_monotonicity(const RunConfig& cfg) {
    const double slack = cfg.tolerance("monotonicity_slack", 1e-6);
    Check c;
    std::size_t not_unimodal = 0;
    const auto samples = rearrangement_samples(cfg, 24);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto r = unimodal_rearrangement(s.m, s.params, s.bc, cfg.grid_n);
        if (!is_unimodal(r.m_R)) ++not_unimodal;
        const double before = extrapolated_lambda(s.m, s.params, s.bc, cfg.grid_n);
        const double after = extrapolated_lambda(r.m_R, s.params, s.bc, cfg.grid_n);
        c.see(after - before, "sample " + std::to_string(i) + " (" + s.bc.describe() + ", " + describe(s.m) + ")");
    }
    std::ostringstream os;
    os << "max lambda(m_R) - lambda(m) = " << format_double(c.worst) << " at " << c.where << "; " << not_unimodal
       << " non-unimodal results";
    return {"rearrangement_monotonicity", c.worst <= slack && not_unimodal == 0, slack - c.worst, os.str()};
}

PropertyResult equimeasurability(const RunConfig& cfg) {
    constexpr double tol = 1e-14;
    Check c;
    const auto samples = rearrangement_samples(cfg, 24);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto r = unimodal_rearrangement(s.m, s.params, s.bc, cfg.grid_n);
        const auto label = "sample " + std::to_string(i);
        for (double v : r.m_tilde.values())
            for (double level : {v, std::nextafter(v, -2.0)})
                c.see(std::abs(level_set_length(r.m_tilde, level) - level_set_length(r.m_tilde_R, level)),
                      label + " level sets");
        double unit = 0.0;
        for (std::size_t k = 0; k < r.m_tilde_R.pieces(); ++k)
            unit += std::exp(s.params.alpha * r.m_tilde_R.values()[k]) * r.m_tilde_R.piece_length(k);
        c.see(std::abs(unit - 1.0), label + " int e^(alpha m~R)");
        c.see(std::abs(exp_mass(r.m_tilde, s.params.alpha) - mass(s.m)), label + " int m~ e^(alpha m~)");
    }
    return {"equimeasurability", c.worst <= tol, tol - c.worst,
            "max identity defect " + format_double(c.worst) + " at " + c.where};
}

PropertyResult mu_concavity(const RunConfig& cfg) {
    constexpr double slack = 1e-9;
    Rng rng(cfg.seed + 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Check c;
    for (int i = 0; i < 12; ++i) {
        const auto m = random_sign_changing_weight(rng, 1.0);
        const ModelParams p{0.3 * unit(rng), 1.0, 0.4};
        const auto bc = i % 3 == 0 ? Boundary::neumann() : Boundary::robin(5.0 * unit(rng));
        const auto forms = assemble(m, p, bc, Discretization::for_weight(m, cfg.grid_n));
        for (int t = 0; t < 5; ++t) {
            double l[3] = {60.0 * unit(rng), 60.0 * unit(rng), 60.0 * unit(rng)};
            std::sort(l, l + 3);
            if (l[2] - l[0] < 1e-3) continue;
            const double mu0 = mu_of_lambda(forms, l[0]);
            const double mu1 = mu_of_lambda(forms, l[1]);
            const double mu2 = mu_of_lambda(forms, l[2]);
            const double chord = ((l[2] - l[1]) * mu0 + (l[1] - l[0]) * mu2) / (l[2] - l[0]);
            const double scale = 1.0 + std::max({std::abs(mu0), std::abs(mu1), std::abs(mu2)});
            c.see((chord - mu1) / scale, "weight " + std::to_string(i));
        }
    }
    return {"mu_concavity", c.worst <= slack, slack - c.worst,
            "max scaled chord excess " + format_double(c.worst) + " at " + c.where};
}

PropertyResult mu_at_zero(const RunConfig& cfg) {
    Rng rng(cfg.seed + 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_mu = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 12; ++i) {
        const auto m = random_sign_changing_weight(rng, 1.0);
        const ModelParams p{0.3 * unit(rng), 1.0, 0.4};
        const auto bc = Boundary::robin(0.1 + 5.0 * unit(rng));
        min_mu = std::min(min_mu, mu_of_lambda(m, p, bc, Discretization::for_weight(m, cfg.grid_n), 0.0));
    }
    return {"mu_at_zero_positive", min_mu > 0.0, min_mu, "min mu(0) over 12 Robin problems " + format_double(min_mu)};
}

PropertyResult trichotomy(const RunConfig& cfg) {
    constexpr double flat = 1e-8;
    const ModelParams p{0.2, 1.0, 0.4};
    const double delta = p.delta_star();
    const double bc = beta_crit(p, delta);
    auto opts = cfg.design_options().locate;
    const auto below = locate_optimal_interval(Boundary::robin(0.5 * bc), delta, p, opts);
    const auto above = locate_optimal_interval(Boundary::robin(2.0 * bc), delta, p, opts);
    const auto at = locate_optimal_interval(Boundary::robin(bc), delta, p, opts);
    const bool placed = below.regime == Regime::BoundaryLeft && above.regime == Regime::Centered;
    std::ostringstream os;
    os << "below: " << regime_name(below.regime) << ", above: " << regime_name(above.regime)
       << ", spread at beta_crit " << format_double(at.objective_spread);
    const double margin = placed ? flat - at.objective_spread : kNoMeasure;
    return {"trichotomy", placed && at.objective_spread <= flat, margin, os.str()};
}

PropertyResult mollify(const RunConfig& cfg) {
    const ModelParams p{0.2, 1.0, 0.4};
    const auto opt = locate_optimal_interval(Boundary::robin(1.0), p.delta_star(), p, cfg.design_options().locate);
    const auto pts = mollify_demo(opt, {0.1, 0.05, 0.02, 0.01, 0.005}, p, cfg.grid_n);
    const double star = extrapolated_lambda(opt.weight(p), p, opt.boundary, cfg.grid_n);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        margin = std::min(margin, (pts[i].lambda - pts[i + 1].lambda) / star);
    margin = std::min(margin, (pts.back().lambda - star) / star);
    std::ostringstream os;
    os << "relative gap at width " << pts.back().width << ": " << format_double((pts.back().lambda - star) / star);
    return {"mollify_demo", margin > 0.0, margin, os.str()};
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
}

VerifyReport run_verify(const RunConfig& cfg) {
    using Property = PropertyResult (*)(const RunConfig&);
    const std::pair<const char*, Property> battery[] = {
        {"discretization_agreement", discretization_agreement},
        {"neumann_zero_regime", neumann_zero_regime},
        {"rearrangement_monotonicity", rearrangement_monotonicity},
        {"equimeasurability", equimeasurability},
        {"mu_concavity", mu_concavity},
        {"mu_at_zero_positive", mu_at_zero},
        {"trichotomy", trichotomy},
        {"mollify_demo", mollify},
    };
    VerifyReport report;
    report.seed = cfg.seed;
    report.grid_n = cfg.grid_n;
    for (const auto& [name, fn] : battery) {
        try {
            report.properties.push_back(fn(cfg));
        } catch (const std::exception& e) {
            report.properties.push_back({name, false, kNoMeasure, std::string("threw: ") + e.what()});
        }
    }
    return report;
}

nlohmann::json report_to_json(const VerifyReport& report) {
    char seed[32];
    std::snprintf(seed, sizeof seed, "0x%llx", static_cast<unsigned long long>(report.seed));
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : report.properties)
        props.push_back({{"name", p.name},
                         {"passed", p.passed},
                         {"margin", std::clamp(p.margin, -1e300, 1e300)},
                         {"detail", p.detail}});
    return {{"seed", seed}, {"grid_n", report.grid_n}, {"passed", report.passed()}, {"properties", props}};
}

}  // namespace resopt::cli
