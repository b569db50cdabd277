#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "resopt/error.hpp"
#include "resopt/sampling.hpp"
#include "resopt/weights.hpp"

using namespace resopt;

TEST_CASE("model params validation") {
    CHECK_NOTHROW(ModelParams{0.0, 1.0, 0.4}.validate());
    CHECK_THROWS_AS(ModelParams({-0.1, 1.0, 0.4}).validate(), DomainError);
    CHECK_THROWS_AS(ModelParams({0.1, 0.0, 0.4}).validate(), DomainError);
    CHECK_THROWS_AS(ModelParams({0.1, 1.0, 1.0}).validate(), DomainError);
    CHECK_THROWS_AS(ModelParams({0.1, 1.0, 0.0}).validate(), DomainError);
    CHECK(ModelParams{0.2, 1.0, 0.4}.delta_star() == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("boundary kinds") {
    CHECK(Boundary::neumann().is_neumann());
    CHECK(Boundary::dirichlet().is_dirichlet());
    CHECK(std::isinf(Boundary::dirichlet().beta()));
    CHECK_THROWS_AS(Boundary::robin(-1.0), DomainError);
    CHECK_THROWS_AS(Boundary::robin(INFINITY), DomainError);
    CHECK(Boundary::robin(2.5).describe() == "robin(2.5)");
}

TEST_CASE("piecewise weight construction and lookup") {
    CHECK_THROWS_AS(PiecewiseWeight({0.0, 0.5}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(PiecewiseWeight({0.1, 1.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(PiecewiseWeight({0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0}), DomainError);

    const PiecewiseWeight m({0.0, 0.25, 0.5, 1.0}, {-1.0, 2.0, 2.0});
    CHECK(eval(m, 0.0) == -1.0);
    CHECK(eval(m, 0.25) == 2.0);
    CHECK(eval(m, 1.0) == 2.0);
    CHECK(m.piece_at(0.3) == 1);
    CHECK(m.merged().pieces() == 2);
    CHECK(m.min_value() == -1.0);
    CHECK(m.max_value() == 2.0);
}

TEST_CASE("mass integrals match direct sums") {
    Rng rng(kDefaultSeed);
    for (int i = 0; i < 20; ++i) {
        const auto m = random_sign_changing_weight(rng, 2.0);
        std::vector<double> bp(m.breakpoints().begin(), m.breakpoints().end());
        std::vector<double> v(m.values().begin(), m.values().end());
        const auto pieces = oracle::pieces_of(bp, v);
        for (double a : {0.0, 0.3, 1.1}) {
            CHECK(mass(m) == doctest::Approx(oracle::integral(pieces, [](double x) { return x; })).epsilon(1e-14));
            CHECK(exp_mass(m, a) ==
                  doctest::Approx(oracle::integral(pieces, [a](double x) { return x * std::exp(a * x); }))
                      .epsilon(1e-13));
            const double h = 1e-5;
            const double fd = (exp_mass(m, a + h) - exp_mass(m, a - h)) / (2.0 * h);
            CHECK(exp_mass_derivative(m, a) == doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("alpha threshold of the optimal interval weight") {
    const ModelParams p{0.0, 1.0, 0.4};
    CHECK(abar(p) == doctest::Approx(0.5 * std::log(7.0 / 3.0)).epsilon(1e-14));
    const auto m = BangBangInterval{0.2, p.delta_star(), p}.weight();
    CHECK(std::abs(alpha_star(m) - abar(p)) < 1e-10);

    for (double kappa : {0.5, 2.0, 3.0})
        for (double delta : {0.1, 0.2}) {
            const ModelParams q{0.0, kappa, 0.3};
            const auto w = BangBangInterval{0.0, delta, q}.weight();
            CHECK(std::abs(alpha_star(w) - oracle::alpha_star_bang_bang(delta, kappa)) < 1e-10);
        }
}

TEST_CASE("alpha_star edge cases") {
    CHECK(std::isinf(alpha_star(PiecewiseWeight::constant(-1.0))));
    CHECK(alpha_star(PiecewiseWeight::constant(0.5)) == 0.0);
}

TEST_CASE("admissibility reasons") {
    const ModelParams p{0.1, 1.0, 0.4};
    CHECK(is_admissible(BangBangInterval{0.1, 0.3, p}.weight(), p));
    CHECK(is_admissible(PiecewiseWeight({0.0, 0.5, 1.0}, {-2.0, 1.0}), p).failure ==
          AdmissibilityFailure::LowerBound);
    CHECK(is_admissible(PiecewiseWeight({0.0, 0.5, 1.0}, {-1.0, 1.5}), p).failure ==
          AdmissibilityFailure::UpperBound);
    CHECK(is_admissible(PiecewiseWeight({0.0, 0.5, 1.0}, {-1.0, 1.0}), p).failure == AdmissibilityFailure::Mass);
    CHECK(is_admissible(PiecewiseWeight::constant(-1.0), p).failure == AdmissibilityFailure::NoPositivePart);
    CHECK(is_admissible(PiecewiseWeight::constant(-1.0, 2.0), p).failure == AdmissibilityFailure::Domain);
}

TEST_CASE("random admissible weights are admissible") {
    Rng rng(kDefaultSeed);
    for (double kappa : {0.5, 1.0, 3.0}) {
        const ModelParams p{0.0, kappa, 0.4};
        for (int i = 0; i < 50; ++i) {
            const auto m = random_admissible_weight(rng, p);
            const auto a = is_admissible(m, p);
            INFO(a.reason);
            CHECK(a.ok);
        }
    }
}

TEST_CASE("exhaustive exp-mass maximizer is bang-bang") {
    // m0 = 1/2 with 12 cells lets a bang-bang weight saturate the mass bound.
    const ModelParams p{0.2, 1.0, 0.5};
    const std::vector<double> levels{-1.0, 0.0, 0.5, 1.0};
    const auto best = brute_force_expmass_max(p, 12, levels);
    CHECK(best.level_counts[1] == 0);
    CHECK(best.level_counts[2] == 0);
    CHECK(best.level_counts[3] == 3);
    CHECK(best.value == doctest::Approx((3.0 * std::exp(0.2) - 9.0 * std::exp(-0.2)) / 12.0).epsilon(1e-14));
    CHECK(mass(best.weight) <= -p.m0 + kMassSlack);

    CHECK_THROWS_AS(brute_force_expmass_max(p, 13, levels), SizeError);
    CHECK_THROWS_AS(brute_force_expmass_max(p, 4, std::vector<double>{-1.0, 2.0}), DomainError);
}
