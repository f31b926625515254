#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "tsgag/errors.hpp"

namespace tsgag {

struct IntervalSpec {
  double a = 0;
  double b = 0;
};

struct AtomSpec {
  double position = 0;
  double weight = 0;
};

/// Raw user input for a time scale: compact intervals plus weighted
/// isolated points, in any order.
struct TimeScaleSpec {
  std::vector<IntervalSpec> intervals;
  std::vector<AtomSpec> atoms;
};

/// One connected component: either a nondegenerate compact interval [a,b]
/// (measure b-a) or an atom at position `a == b` carrying a point mass.
struct Component {
  enum class Kind { Interval, Atom };

  Kind kind = Kind::Interval;
  double a = 0;
  double b = 0;
  double weight = 0;  // atom point mass; unused for intervals

  bool is_interval() const { return kind == Kind::Interval; }
  bool is_atom() const { return kind == Kind::Atom; }
  double lo() const { return a; }
  double hi() const { return b; }
  double position() const { return a; }  // atoms only
  double measure() const { return is_interval() ? b - a : weight; }
};

/// A bounded time scale with finitely many connected components, each of
/// positive measure, any two distinct components a positive distance apart.
/// Immutable after construction; safe for concurrent reads.
class TimeScale {
 public:
  /// Empty scale; only meaningful after assignment from build().
  TimeScale() = default;

  static TimeScale build(const TimeScaleSpec& spec);

  const std::vector<Component>& components() const { return components_; }
  std::size_t component_count() const { return components_.size(); }
  std::size_t interval_count() const { return interval_count_; }
  std::size_t atom_count() const { return components_.size() - interval_count_; }

  /// Min set-distance between distinct components; +inf for one component.
  double delta0() const { return delta0_; }
  /// sup T - inf T.
  double diam() const { return diam_; }
  double total_measure() const { return total_measure_; }
  double inf() const { return components_.front().lo(); }
  double sup() const { return components_.back().hi(); }

  bool contains(double t) const { return component_of(t) >= 0; }
  /// Index of the component containing t, or -1.
  int component_of(double t) const;

  /// Canonical spec (sorted, validated); rebuilding from it is the identity.
  TimeScaleSpec spec() const;

 private:
  std::vector<Component> components_;
  std::size_t interval_count_ = 0;
  double delta0_ = std::numeric_limits<double>::infinity();
  double diam_ = 0;
  double total_measure_ = 0;
};

}  // namespace tsgag
