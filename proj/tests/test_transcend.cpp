#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "resopt/eigensolve.hpp"
#include "resopt/error.hpp"
#include "resopt/transcend.hpp"

using namespace resopt;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("critical Robin coefficient of the reference configuration") {
    const ModelParams p{0.2, 1.0, 0.4};
    CHECK(std::abs(beta_crit(p, 0.3) - 3.2232) < 1e-3);
}

TEST_CASE("critical coefficient matches the arctangent expression") {
    for (double alpha : {0.0, 0.1, 0.4})
        for (double kappa : {0.3, 0.5, 1.0, 2.0})
            for (double delta : {0.1, 0.3, 0.6}) {
                const ModelParams p{alpha, kappa, 0.4};
                CHECK(rel(beta_crit(p, delta), oracle::beta_crit(alpha, kappa, delta)) < 1e-13);
            }
}

TEST_CASE("transcendental root agrees with shooting") {
    std::mt19937_64 rng(0xE16E);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double kappas[] = {0.5, 1.0, 2.0};
    for (int i = 0; i < 30; ++i) {
        const ModelParams p{0.4 * u(rng), kappas[i % 3], 0.4};
        const double delta = 0.1 + 0.6 * u(rng);
        const double xi = (1.0 - delta) * u(rng);
        const double beta = std::exp(std::log(0.05) + std::log(400.0) * u(rng));
        const TranscendParams tp{p, delta, Boundary::robin(beta)};
        const double root = transcendental_root(xi, beta, tp);
        const double ref = oracle::principal_eigenvalue(oracle::bang_bang(xi, delta, p.kappa), p.alpha, beta, 1e-4);
        CHECK(rel(root, ref) < 1e-10);
    }
}

TEST_CASE("Dirichlet root at the boundary interval") {
    for (double kappa : {0.5, 1.0, 2.0}) {
        const ModelParams p{0.2, kappa, 0.4};
        const TranscendParams tp{p, 0.3, Boundary::dirichlet()};
        const double root = dirichlet_root(tp);
        const double ref = oracle::principal_eigenvalue(oracle::bang_bang(0.0, 0.3, kappa), 0.2, -1.0);
        CHECK(rel(root, ref) < 1e-11);
        CHECK(transcendental_root(0.0, tp) == root);
        CHECK_THROWS_AS(transcendental_root(0.1, tp), DomainError);
    }
}

TEST_CASE("slope of F at zero") {
    const ModelParams p{0.25, 1.5, 0.4};
    for (double beta : {0.3, 2.0, 9.0}) {
        const TranscendParams tp{p, 0.35, Boundary::robin(beta)};
        for (double xi : {0.0, 0.3}) {
            const double s = 1e-5;
            const double fd = F_components(xi, beta, s * s, tp).F / s;
            CHECK(rel(F_slope_at_zero(beta, tp), fd) < 1e-6);
        }
    }
}

TEST_CASE("scaled F keeps the sign of F") {
    const ModelParams p{0.2, 1.0, 0.4};
    const TranscendParams tp{p, 0.3, Boundary::robin(2.0)};
    for (double lam = 0.5; lam < 100.0; lam *= 1.3) {
        const double f = F_components(0.2, 2.0, lam, tp).F;
        const double g = F_scaled(0.2, 2.0, lam, tp);
        CHECK((f > 0.0) == (g > 0.0));
    }
}

TEST_CASE("at the critical coefficient the root does not depend on position") {
    for (double kappa : {0.5, 1.0, 2.0}) {
        const ModelParams p{0.2, kappa, 0.4};
        const double delta = p.delta_star();
        const double bc = beta_crit(p, delta);
        const TranscendParams tp{p, delta, Boundary::robin(bc)};
        const double r0 = transcendental_root(0.0, bc, tp);
        const double rc = transcendental_root(0.5 * (1.0 - delta), bc, tp);
        CHECK(rel(r0, rc) < 1e-12);
        CHECK(rel(r0, bc * bc * std::exp(2.0 * p.alpha)) < 1e-12);
    }
}

TEST_CASE("regime identities hold at the roots") {
    const ModelParams p{0.2, 1.0, 0.4};
    const double delta = 0.3;
    const TranscendParams tp{p, delta, Boundary::neumann()};
    for (double beta : {0.5, 1.0, 6.0, 20.0}) {
        const double r0 = transcendental_root(0.0, beta, tp);
        const double rc = transcendental_root(0.5 * (1.0 - delta), beta, tp);
        const auto e0 = regime_equations(RegimeForm::Boundary, beta, r0, tp);
        const auto ec = regime_equations(RegimeForm::Centered, beta, rc, tp);
        CHECK(std::abs(e0.lhs - e0.rhs) <= 1e-8 * std::max(1.0, std::abs(e0.lhs)));
        CHECK(std::abs(ec.lhs - ec.rhs) <= 1e-8 * std::max(1.0, std::abs(ec.lhs)));
    }
    CHECK(regime_equations(1.0, 10.0, tp).form == RegimeForm::Boundary);
    CHECK(regime_equations(5.0, 10.0, tp).form == RegimeForm::Centered);
    CHECK_THROWS_AS(regime_equations(beta_crit(tp), 10.0, tp), DomainError);
}

TEST_CASE("position difference of F") {
    const ModelParams p{0.3, 2.0, 0.4};
    const double delta = 0.25;
    const TranscendParams tp{p, delta, Boundary::neumann()};
    for (double beta : {0.5, 4.0})
        for (double lam : {2.0, 15.0, 40.0}) {
            const double a = std::sqrt(lam * p.kappa) * delta;
            const double diff = F_components(0.0, beta, lam, tp).F - F_components(0.5 * (1.0 - delta), beta, lam, tp).F;
            const double expected = delta_diag(beta, lam, tp) * std::sin(a);
            CHECK(std::abs(diff - expected) <= 1e-10 * (1.0 + std::abs(diff)));
        }
}

TEST_CASE("closed-form eigenfunction matches the discrete one") {
    const ModelParams p{0.2, 1.0, 0.4};
    const double delta = 0.3, beta = 1.5;
    const TranscendParams tp{p, delta, Boundary::robin(beta)};
    for (double xi : {0.0, 0.15, 0.35, 0.7}) {
        const double lam = transcendental_root(xi, beta, tp);
        const auto f = closed_form_eigenfunction(xi, beta, lam, tp);
        CHECK(f.det_residual < 1e-10);
        CHECK(f.jump_residual < 1e-10);

        // Robin conditions with the flux e^{alpha m} phi'.
        const double m0 = xi > 0.0 ? -1.0 : p.kappa;
        const double m1 = xi + delta < 1.0 ? -1.0 : p.kappa;
        const double scale = std::abs(f(0.0)) + std::abs(f(1.0));
        CHECK(std::abs(std::exp(p.alpha * m0) * f.derivative(0.0) - beta * f(0.0)) < 1e-9 * scale);
        CHECK(std::abs(std::exp(p.alpha * m1) * f.derivative(1.0) + beta * f(1.0)) < 1e-9 * scale);

        const auto m = BangBangInterval{xi, delta, p}.weight();
        const auto& pair = expect_pair(principal_eigenvalue(m, p, Boundary::robin(beta), 4000));
        const auto cf = f.sample(pair.x);
        const double cmax = *std::max_element(cf.begin(), cf.end());
        double worst = 0.0;
        for (std::size_t k = 0; k < cf.size(); ++k)
            worst = std::max(worst, std::abs(cf[k] / cmax - pair.phi[k] / pair.phi_max));
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("transcend argument checks") {
    const ModelParams p{0.2, 1.0, 0.4};
    CHECK_THROWS_AS(transcendental_root(0.0, 1.0, TranscendParams{p, 1.2, Boundary::neumann()}), DomainError);
    CHECK_THROWS_AS(transcendental_root(0.0, -1.0, TranscendParams{p, 0.3, Boundary::neumann()}), DomainError);
    CHECK_THROWS_AS(transcendental_root(0.8, 1.0, TranscendParams{p, 0.3, Boundary::neumann()}), DomainError);
}
