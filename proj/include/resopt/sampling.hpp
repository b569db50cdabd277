#pragma once

#include <cstdint>
#include <random>

#include "resopt/weights.hpp"

namespace resopt {

/// Default seed for every randomized check (CLI verify, acceptance suite).
inline constexpr std::uint64_t kDefaultSeed = 0xE16E;

using Rng = std::mt19937_64;

/// Draws an admissible piecewise weight with between min_pieces and
/// max_pieces pieces: random breakpoints and levels in [-1, kappa], pulled
/// towards -1 until the mass constraint holds.
PiecewiseWeight random_admissible_weight(Rng& rng, const ModelParams& params,
                                         std::size_t min_pieces = 2, std::size_t max_pieces = 8);

/// Draws a sign-changing weight with levels in [-1, kappa] and no mass constraint.
PiecewiseWeight random_sign_changing_weight(Rng& rng, double kappa,
                                            std::size_t min_pieces = 2, std::size_t max_pieces = 8);

}  // namespace resopt
