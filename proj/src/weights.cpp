#include "resopt/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resopt/error.hpp"

namespace resopt {

void ModelParams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be a finite nonnegative number");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be a finite positive number");
    if (!(m0 > 0.0 && m0 < 1.0))
        throw DomainError("m0 must lie in (0, 1)");
}

Boundary Boundary::robin(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw DomainError("Robin coefficient must be finite and nonnegative");
    return Boundary(Kind::Robin, beta);
}

std::string Boundary::describe() const {
    if (is_dirichlet()) return "dirichlet";
    if (is_neumann()) return "neumann";
    std::ostringstream os;
    os << "robin(" << beta_ << ")";
    return os.str();
}

PiecewiseWeight::PiecewiseWeight(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty() || breakpoints_.size() != values_.size() + 1)
        throw DomainError("a weight needs one more breakpoint than values");
    if (breakpoints_.front() != 0.0)
        throw DomainError("first breakpoint must be 0");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] < breakpoints_[i + 1]))
            throw DomainError("breakpoints must be strictly increasing");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("weight values must be finite");
    if (!std::isfinite(breakpoints_.back())) throw DomainError("breakpoints must be finite");
}

PiecewiseWeight PiecewiseWeight::constant(double value, double length) {
    return PiecewiseWeight({0.0, length}, {value});
}

std::size_t PiecewiseWeight::piece_at(double x) const {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, values_.size() - 1);
}

PiecewiseWeight PiecewiseWeight::merged() const {
    std::vector<double> bp{breakpoints_.front()};
    std::vector<double> vals{values_.front()};
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] == vals.back()) continue;
        bp.push_back(breakpoints_[i]);
        vals.push_back(values_[i]);
    }
    bp.push_back(breakpoints_.back());
    return PiecewiseWeight(std::move(bp), std::move(vals));
}

double PiecewiseWeight::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double PiecewiseWeight::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

void BangBangInterval::validate() const {
    params.validate();
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("interval length must lie in (0, 1)");
    if (!(xi >= 0.0 && xi <= 1.0 - delta)) throw DomainError("interval must lie inside (0, 1)");
}

PiecewiseWeight BangBangInterval::weight() const {
    validate();
    const double k = params.kappa;
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    if (xi > 0.0) {
        bp.push_back(xi);
        vals.push_back(-1.0);
    }
    vals.push_back(k);
    const double right = xi + delta;
    if (right < 1.0) {
        bp.push_back(right);
        vals.push_back(-1.0);
    }
    bp.push_back(1.0);
    return PiecewiseWeight(std::move(bp), std::move(vals));
}

double eval(const PiecewiseWeight& m, double x) {
    if (!(x >= 0.0 && x <= m.length()))
        throw DomainError("evaluation point outside the weight's domain");
    return m.values()[m.piece_at(x)];
}

double mass(const PiecewiseWeight& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.pieces(); ++i) s += m.values()[i] * m.piece_length(i);
    return s;
}

double exp_mass(const PiecewiseWeight& m, double alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.pieces(); ++i) {
        const double v = m.values()[i];
        s += v * std::exp(alpha * v) * m.piece_length(i);
    }
    return s;
}

double exp_mass_derivative(const PiecewiseWeight& m, double alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.pieces(); ++i) {
        const double v = m.values()[i];
        s += v * v * std::exp(alpha * v) * m.piece_length(i);
    }
    return s;
}

double alpha_star(const PiecewiseWeight& m) {
    if (!(m.max_value() > 0.0)) return std::numeric_limits<double>::infinity();
    if (exp_mass(m, 0.0) >= 0.0) return 0.0;
    double lo = 0.0;
    double hi = kAlphaStarBracket;
    if (exp_mass(m, hi) < 0.0) return std::numeric_limits<double>::infinity();

    // Newton on the increasing map, falling back to bisection whenever a step
    // leaves the current bracket.
    double a = lo;
    for (int it = 0; it < 200; ++it) {
        const double f = exp_mass(m, a);
        if (f == 0.0) return a;
        if (f < 0.0) lo = a; else hi = a;
        const double df = exp_mass_derivative(m, a);
        double next = a - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - a) <= 1e-15 * std::max(1.0, std::abs(next)) || hi - lo <= 1e-15 * hi)
            return next;
        a = next;
    }
    return a;
}

double abar(const ModelParams& params) {
    params.validate();
    const double k = params.kappa;
    const double m0 = params.m0;
    return std::log((k + m0) / (k * (1.0 - m0))) / (1.0 + k);
}

Admissibility is_admissible(const PiecewiseWeight& m, const ModelParams& params) {
    auto fail = [](AdmissibilityFailure f, std::string why) {
        return Admissibility{false, f, std::move(why)};
    };
    if (m.length() != 1.0) return fail(AdmissibilityFailure::Domain, "weight is not defined on (0, 1)");
    if (m.min_value() < -1.0) return fail(AdmissibilityFailure::LowerBound, "weight falls below -1");
    if (m.max_value() > params.kappa) return fail(AdmissibilityFailure::UpperBound, "weight exceeds kappa");
    const double total = mass(m);
    if (total > -params.m0 + kMassSlack) {
        std::ostringstream os;
        os << "mass " << total << " exceeds -m0 = " << -params.m0;
        return fail(AdmissibilityFailure::Mass, os.str());
    }
    bool positive = false;
    for (std::size_t i = 0; i < m.pieces(); ++i)
        if (m.values()[i] > 0.0 && m.piece_length(i) > 0.0) positive = true;
    if (!positive) return fail(AdmissibilityFailure::NoPositivePart, "weight is never positive");
    return {};
}

ExpMassMaximum brute_force_expmass_max(const ModelParams& params, std::size_t cells,
                                       std::span<const double> levels) {
    params.validate();
    if (cells == 0 || levels.empty()) throw DomainError("need at least one cell and one level");
    if (cells > 12 || levels.size() > 4)
        throw SizeError("exhaustive search limited to 12 cells and 4 levels");
    for (double l : levels)
        if (l < -1.0 || l > params.kappa) throw DomainError("levels must lie in [-1, kappa]");

    const std::size_t L = levels.size();
    std::size_t total = 1;
    for (std::size_t c = 0; c < cells; ++c) total *= L;

    // Both objective and constraint depend only on how many cells carry each
    // level, so they are evaluated from the counts; every arrangement is
    // still visited and the first maximizer in enumeration order is kept.
    std::vector<double> contrib(L), level_mass(L);
    for (std::size_t l = 0; l < L; ++l) {
        contrib[l] = levels[l] * std::exp(params.alpha * levels[l]);
        level_mass[l] = levels[l];
    }
    const double n = static_cast<double>(cells);

    std::vector<std::size_t> digits(cells, 0);
    std::vector<std::size_t> counts(L, 0);
    counts[0] = cells;

    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_digits, best_counts;

    for (std::size_t code = 0; code < total; ++code) {
        double msum = 0.0, esum = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            msum += static_cast<double>(counts[l]) * level_mass[l];
            esum += static_cast<double>(counts[l]) * contrib[l];
        }
        if (msum / n <= -params.m0 + kMassSlack && esum / n > best) {
            best = esum / n;
            best_digits = digits;
            best_counts = counts;
            found = true;
        }
        // odometer increment
        for (std::size_t c = 0; c < cells; ++c) {
            --counts[digits[c]];
            if (++digits[c] < L) {
                ++counts[digits[c]];
                break;
            }
            digits[c] = 0;
            ++counts[0];
        }
    }
    if (!found) throw DomainError("no arrangement satisfies the mass constraint");

    std::vector<double> bp(cells + 1), vals(cells);
    for (std::size_t c = 0; c <= cells; ++c) bp[c] = static_cast<double>(c) / n;
    bp.back() = 1.0;
    for (std::size_t c = 0; c < cells; ++c) vals[c] = levels[best_digits[c]];
    return {PiecewiseWeight(std::move(bp), std::move(vals)), best, std::move(best_counts)};
}

}  // namespace resopt
