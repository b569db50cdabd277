#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resopt/eigensolve.hpp"
#include "resopt/weights.hpp"

namespace resopt {

enum class Monotone { Increasing, Decreasing };

/// Pieces sorted by value with their lengths kept; equal neighbours fused.
PiecewiseWeight monotone_rearrangement(const PiecewiseWeight& m, Monotone direction);

/// y = c(x) = int_0^x e^{-alpha m}. c is piecewise linear with the same
/// breakpoints as m, so m~ = m o c^{-1} is again piecewise constant.
struct ChangeOfVariable {
    double alpha = 0.0;
    std::vector<double> x_breakpoints;
    std::vector<double> y_breakpoints;
    PiecewiseWeight m_tilde = PiecewiseWeight::constant(0.0);

    double total() const { return y_breakpoints.back(); }
    double forward(double x) const;
    double inverse(double y) const;
};

ChangeOfVariable change_of_variable_forward(const PiecewiseWeight& m, double alpha);

/// z = int_0^y e^{alpha m~}: maps a weight in the y-variable back to the
/// physical variable. The domain length of the result is int e^{alpha m~}.
PiecewiseWeight change_of_variable_inverse(const PiecewiseWeight& m_tilde, double alpha);

/// Total length of {m > level}.
double level_set_length(const PiecewiseWeight& m, double level);

struct RearrangedPair {
    PiecewiseWeight m_R = PiecewiseWeight::constant(0.0);        ///< on (0, 1)
    PiecewiseWeight m_tilde = PiecewiseWeight::constant(0.0);    ///< on (0, c(1))
    PiecewiseWeight m_tilde_R = PiecewiseWeight::constant(0.0);  ///< on (0, c(1))
    double x_plus = 0.0;
    double y_plus = 0.0;
    double lambda = 0.0;  ///< principal eigenvalue of the input weight
    std::optional<std::string> warning;
};

/// Rearranges m~ increasingly on (0, y+) and decreasingly on (y+, c(1)),
/// where y+ = c(x+) and x+ is the first maximizer of the principal
/// eigenfunction on the grid, then maps back to (0, 1). Warns when
/// alpha > 1/2.
RearrangedPair unimodal_rearrangement(const PiecewiseWeight& m, const ModelParams& params, const Boundary& bc,
                                      std::size_t n = kDefaultCells);

/// Values non-decreasing then non-increasing across pieces.
bool is_unimodal(const PiecewiseWeight& m);

}  // namespace resopt
