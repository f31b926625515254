#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "tsgag/tsfunction.hpp"

namespace tsgag {

/// Deterministic seed derived from a scenario id and a per-sample index, so
/// batches parallelize with reproducible per-sample streams.
std::uint64_t derive_seed(std::string_view scenario_id, std::uint64_t index);

/// Random hybrid time scale with up to `max_components` components (at least
/// one), mixing intervals and weighted atoms, separation >= 0.05.
TimeScale random_hybrid_timescale(std::mt19937_64& rng, int max_components = 4);

/// Random sampled function: piecewise-linear knots on each interval
/// component, one value per atom; values are O(1).
TSFunction random_sampled_function(const TimeScale& ts, std::mt19937_64& rng,
                                   int max_knots = 6);

}  // namespace tsgag
