#include "resopt/sampling.hpp"

#include <algorithm>
#include <vector>

#include "resopt/error.hpp"

namespace resopt {
namespace {

std::vector<double> random_breakpoints(Rng& rng, std::size_t pieces) {
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    for (;;) {
        std::vector<double> bp{0.0};
        for (std::size_t i = 1; i < pieces; ++i) bp.push_back(unit(rng));
        bp.push_back(1.0);
        std::sort(bp.begin(), bp.end());
        bool ok = true;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (bp[i + 1] - bp[i] < 0.01) ok = false;
        if (ok) return bp;
    }
}

std::size_t draw_pieces(Rng& rng, std::size_t lo, std::size_t hi) {
    if (lo < 1 || hi < lo) throw DomainError("invalid piece-count range");
    std::uniform_int_distribution<std::size_t> d(lo, hi);
    return d(rng);
}

}  // namespace

PiecewiseWeight random_sign_changing_weight(Rng& rng, double kappa, std::size_t min_pieces,
                                            std::size_t max_pieces) {
    const std::size_t pieces = std::max<std::size_t>(2, draw_pieces(rng, min_pieces, max_pieces));
    std::uniform_real_distribution<double> level(-1.0, kappa);
    for (;;) {
        auto bp = random_breakpoints(rng, pieces);
        std::vector<double> vals(pieces);
        for (auto& v : vals) v = level(rng);
        const bool pos = std::any_of(vals.begin(), vals.end(), [](double v) { return v > 0.05; });
        const bool neg = std::any_of(vals.begin(), vals.end(), [](double v) { return v < -0.05; });
        if (pos && neg) return PiecewiseWeight(std::move(bp), std::move(vals));
    }
}

PiecewiseWeight random_admissible_weight(Rng& rng, const ModelParams& params, std::size_t min_pieces,
                                         std::size_t max_pieces) {
    params.validate();
    std::uniform_real_distribution<double> shrink(0.5, 1.0);
    for (;;) {
        const auto m = random_sign_changing_weight(rng, params.kappa, min_pieces, max_pieces);
        const double total = mass(m);
        std::vector<double> vals(m.values().begin(), m.values().end());
        if (total > -params.m0) {
            // v -> -1 + t (v + 1) maps the mass to -1 + t (total + 1)
            const double t = shrink(rng) * (1.0 - params.m0) / (total + 1.0);
            for (auto& v : vals) v = -1.0 + t * (v + 1.0);
        }
        PiecewiseWeight candidate(std::vector<double>(m.breakpoints().begin(), m.breakpoints().end()),
                                  std::move(vals));
        if (is_admissible(candidate, params)) return candidate;
    }
}

}  // namespace resopt
