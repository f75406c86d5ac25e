#pragma once

#include "shockflow/series.hpp"

#include <span>

namespace shockflow {

inline constexpr std::uint8_t kDown = 1;
inline constexpr std::uint8_t kFlat = 2;
inline constexpr std::uint8_t kUp = 3;

// First-difference sign symbols: 3 if the step exceeds epsilon, 1 if it is below -epsilon, 2 otherwise.
// Throws InputError for nonuniform series ("nonuniform series") or fewer than two values ("series too short").
DiscreteSeries derivative_sign_encode(const TimeSeries& series, double epsilon = 0.0);
DiscreteSeries derivative_sign_encode(std::span<const double> values, double epsilon = 0.0);

} // namespace shockflow
