#include "tsgag/random_functions.hpp"

#include <algorithm>

namespace tsgag {

std::uint64_t derive_seed(std::string_view scenario_id, std::uint64_t index) {
  // FNV-1a over the id, then mix the index (splitmix64 finalizer).
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : scenario_id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t z = h + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

TimeScale random_hybrid_timescale(std::mt19937_64& rng, int max_components) {
  std::uniform_int_distribution<int> count_dist(1, std::max(1, max_components));
  std::uniform_real_distribution<double> gap_dist(0.05, 1.0);
  std::uniform_real_distribution<double> len_dist(0.2, 1.5);
  std::uniform_real_distribution<double> weight_dist(0.1, 2.0);
  std::bernoulli_distribution is_interval(0.5);

  const int n = count_dist(rng);
  TimeScaleSpec spec;
  double cursor = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) cursor += gap_dist(rng);
    if (is_interval(rng)) {
      const double len = len_dist(rng);
      spec.intervals.push_back({cursor, cursor + len});
      cursor += len;
    } else {
      spec.atoms.push_back({cursor, weight_dist(rng)});
    }
  }
  // Guarantee at least one component even if the loop produced none.
  if (spec.intervals.empty() && spec.atoms.empty()) {
    spec.intervals.push_back({0.0, 1.0});
  }
  return TimeScale::build(spec);
}

TSFunction random_sampled_function(const TimeScale& ts, std::mt19937_64& rng,
                                   int max_knots) {
  std::uniform_int_distribution<int> knots_dist(2, std::max(2, max_knots));
  std::uniform_real_distribution<double> value_dist(-1.5, 1.5);

  std::vector<Payload> payloads;
  payloads.reserve(ts.component_count());
  for (const Component& c : ts.components()) {
    if (c.is_atom()) {
      payloads.push_back(ConstantFn{value_dist(rng)});
      continue;
    }
    const int k = knots_dist(rng);
    SamplesFn s;
    s.grid.resize(static_cast<std::size_t>(k));
    s.values.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      s.grid[static_cast<std::size_t>(i)] =
          c.lo() + c.measure() * i / static_cast<double>(k - 1);
      s.values[static_cast<std::size_t>(i)] = value_dist(rng);
    }
    payloads.push_back(std::move(s));
  }
  return TSFunction::from_payloads(ts, std::move(payloads));
}

}  // namespace tsgag
