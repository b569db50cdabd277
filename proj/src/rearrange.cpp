#include "resopt/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resopt/error.hpp"

namespace resopt {

namespace {

struct Piece {
    double value;
    double length;
};

std::vector<Piece> pieces_of(const PiecewiseWeight& m) {
    std::vector<Piece> out(m.pieces());
    for (std::size_t i = 0; i < m.pieces(); ++i) out[i] = {m.values()[i], m.piece_length(i)};
    return out;
}

// Lays pieces end to end from 0; the final breakpoint is pinned to `length`.
PiecewiseWeight from_pieces(const std::vector<Piece>& ps, double length) {
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    double x = 0.0;
    const double tiny = 1e-15 * length;
    for (const auto& p : ps) {
        if (!(p.length > tiny)) continue;
        if (!vals.empty() && vals.back() == p.value) {
            x += p.length;
            bp.back() = x;
            continue;
        }
        x += p.length;
        bp.push_back(x);
        vals.push_back(p.value);
    }
    bp.back() = length;
    if (bp.size() > 2 && !(bp[bp.size() - 2] < length)) {
        bp.erase(bp.end() - 2);
        vals.pop_back();
    }
    return PiecewiseWeight(std::move(bp), std::move(vals));
}

void sort_pieces(std::vector<Piece>& ps, Monotone direction) {
    if (direction == Monotone::Increasing)
        std::stable_sort(ps.begin(), ps.end(), [](const Piece& a, const Piece& b) { return a.value < b.value; });
    else
        std::stable_sort(ps.begin(), ps.end(), [](const Piece& a, const Piece& b) { return a.value > b.value; });
}

double map_linear(const std::vector<double>& from, const std::vector<double>& to, double t) {
    if (t <= from.front()) return to.front();
    if (t >= from.back()) return to.back();
    const auto it = std::upper_bound(from.begin(), from.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - from.begin()) - 1;
    const double s = (t - from[k]) / (from[k + 1] - from[k]);
    return to[k] + s * (to[k + 1] - to[k]);
}

}  // namespace

PiecewiseWeight monotone_rearrangement(const PiecewiseWeight& m, Monotone direction) {
    auto ps = pieces_of(m);
    sort_pieces(ps, direction);
    return from_pieces(ps, m.length());
}

double ChangeOfVariable::forward(double x) const { return map_linear(x_breakpoints, y_breakpoints, x); }
double ChangeOfVariable::inverse(double y) const { return map_linear(y_breakpoints, x_breakpoints, y); }

ChangeOfVariable change_of_variable_forward(const PiecewiseWeight& m, double alpha) {
    if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
    ChangeOfVariable c;
    c.alpha = alpha;
    c.x_breakpoints.assign(m.breakpoints().begin(), m.breakpoints().end());
    c.y_breakpoints.assign(1, 0.0);
    for (std::size_t i = 0; i < m.pieces(); ++i)
        c.y_breakpoints.push_back(c.y_breakpoints.back() + std::exp(-alpha * m.values()[i]) * m.piece_length(i));
    c.m_tilde = PiecewiseWeight(c.y_breakpoints, std::vector<double>(m.values().begin(), m.values().end()));
    return c;
}

PiecewiseWeight change_of_variable_inverse(const PiecewiseWeight& m_tilde, double alpha) {
    if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
    std::vector<double> bp{0.0};
    for (std::size_t i = 0; i < m_tilde.pieces(); ++i)
        bp.push_back(bp.back() + std::exp(alpha * m_tilde.values()[i]) * m_tilde.piece_length(i));
    return PiecewiseWeight(std::move(bp), std::vector<double>(m_tilde.values().begin(), m_tilde.values().end()));
}

double level_set_length(const PiecewiseWeight& m, double level) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.pieces(); ++i)
        if (m.values()[i] > level) s += m.piece_length(i);
    return s;
}

bool is_unimodal(const PiecewiseWeight& m) {
    const auto v = m.values();
    std::size_t i = 0;
    while (i + 1 < v.size() && v[i] <= v[i + 1]) ++i;
    while (i + 1 < v.size() && v[i] >= v[i + 1]) ++i;
    return i + 1 == v.size();
}

RearrangedPair unimodal_rearrangement(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                                      std::size_t n) {
    params.validate();
    RearrangedPair out;
    if (params.alpha > 0.5)
        out.warning = "alpha > 1/2: the rearrangement is not guaranteed to lower the eigenvalue";

    const auto result = principal_eigenvalue(m, params, bc, n);
    if (const auto* pair = std::get_if<EigenPair>(&result)) {
        out.lambda = pair->lambda;
        const auto it = std::max_element(pair->phi.begin(), pair->phi.end());
        out.x_plus = pair->x[static_cast<std::size_t>(it - pair->phi.begin())];
    } else {
        // Constant eigenfunction: every point is a maximizer.
        out.lambda = 0.0;
        out.x_plus = 0.0;
    }

    const auto cov = change_of_variable_forward(m, params.alpha);
    out.m_tilde = cov.m_tilde;
    out.y_plus = cov.forward(out.x_plus);

    std::vector<Piece> left, right;
    const auto yb = cov.y_breakpoints;
    for (std::size_t i = 0; i < m.pieces(); ++i) {
        const double v = m.values()[i];
        const double a = yb[i], b = yb[i + 1];
        if (b <= out.y_plus) {
            left.push_back({v, b - a});
        } else if (a >= out.y_plus) {
            right.push_back({v, b - a});
        } else {
            left.push_back({v, out.y_plus - a});
            right.push_back({v, b - out.y_plus});
        }
    }
    sort_pieces(left, Monotone::Increasing);
    sort_pieces(right, Monotone::Decreasing);
    std::vector<Piece> all = std::move(left);
    all.insert(all.end(), right.begin(), right.end());
    out.m_tilde_R = from_pieces(all, cov.total());

    const auto back = change_of_variable_inverse(out.m_tilde_R, params.alpha);
    std::vector<double> bp(back.breakpoints().begin(), back.breakpoints().end());
    if (std::abs(bp.back() - m.length()) > 1e-12 * std::max(1.0, m.length()))
        throw Error("inverse change of variable does not recover the domain length");
    bp.back() = m.length();
    out.m_R = PiecewiseWeight(std::move(bp), std::vector<double>(back.values().begin(), back.values().end()));
    return out;
}

}  // namespace resopt
