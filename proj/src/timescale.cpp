#include "tsgag/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsgag {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpec: return "EmptySpec";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::NonpositiveAtomWeight: return "NonpositiveAtomWeight";
    case ErrorCode::OverlappingComponents: return "OverlappingComponents";
    case ErrorCode::SingularEvaluation: return "SingularEvaluation";
    case ErrorCode::NonconvergedQuadrature: return "NonconvergedQuadrature";
    case ErrorCode::DivergentSeminorm: return "DivergentSeminorm";
    case ErrorCode::FewerThanTwoWeights: return "FewerThanTwoWeights";
    case ErrorCode::MethodUnavailable: return "MethodUnavailable";
    case ErrorCode::InvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::X0NotInT: return "X0NotInT";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::SingularMass: return "SingularMass";
    case ErrorCode::NoNonzeroEigenvalue: return "NoNonzeroEigenvalue";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::TAtOrBelowA: return "TAtOrBelowA";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DomainError: return "DomainError";
  }
  return "UnknownError";
}

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    std::ostringstream oss;
    oss << what << " must be finite, got " << x;
    fail(ErrorCode::DomainError, oss.str());
  }
}

}  // namespace

TimeScale TimeScale::build(const TimeScaleSpec& spec) {
  if (spec.intervals.empty() && spec.atoms.empty()) {
    fail(ErrorCode::EmptySpec, "time scale needs at least one component");
  }

  std::vector<Component> comps;
  comps.reserve(spec.intervals.size() + spec.atoms.size());
  for (const auto& iv : spec.intervals) {
    require_finite(iv.a, "interval endpoint");
    require_finite(iv.b, "interval endpoint");
    if (!(iv.b > iv.a)) {
      std::ostringstream oss;
      oss << "interval [" << iv.a << ", " << iv.b << "] is degenerate";
      fail(ErrorCode::DegenerateInterval, oss.str());
    }
    comps.push_back({Component::Kind::Interval, iv.a, iv.b, 0.0});
  }
  for (const auto& at : spec.atoms) {
    require_finite(at.position, "atom position");
    require_finite(at.weight, "atom weight");
    if (!(at.weight > 0)) {
      std::ostringstream oss;
      oss << "atom at " << at.position << " has weight " << at.weight;
      fail(ErrorCode::NonpositiveAtomWeight, oss.str());
    }
    comps.push_back({Component::Kind::Atom, at.position, at.position, at.weight});
  }

  std::sort(comps.begin(), comps.end(), [](const Component& x, const Component& y) {
    if (x.lo() != y.lo()) return x.lo() < y.lo();
    return x.hi() < y.hi();
  });

  // Components must be strictly separated: touching counts as overlap.
  for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
    double gap = comps[i + 1].lo() - comps[i].hi();
    if (!(gap > 0)) {
      std::ostringstream oss;
      oss << "components [" << comps[i].lo() << ", " << comps[i].hi() << "] and ["
          << comps[i + 1].lo() << ", " << comps[i + 1].hi()
          << "] overlap or touch (gap " << gap << ")";
      fail(ErrorCode::OverlappingComponents, oss.str());
    }
  }

  TimeScale ts;
  ts.components_ = std::move(comps);
  ts.interval_count_ = 0;
  ts.total_measure_ = 0;
  ts.delta0_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.components_.size(); ++i) {
    const Component& c = ts.components_[i];
    if (c.is_interval()) ++ts.interval_count_;
    ts.total_measure_ += c.measure();
    if (i + 1 < ts.components_.size()) {
      ts.delta0_ = std::min(ts.delta0_, ts.components_[i + 1].lo() - c.hi());
    }
  }
  ts.diam_ = ts.components_.back().hi() - ts.components_.front().lo();
  return ts;
}

int TimeScale::component_of(double t) const {
  // Components are few; linear scan is fine at this scale.
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Component& c = components_[i];
    if (t >= c.lo() && t <= c.hi()) return static_cast<int>(i);
  }
  return -1;
}

TimeScaleSpec TimeScale::spec() const {
  TimeScaleSpec out;
  for (const Component& c : components_) {
    if (c.is_interval()) {
      out.intervals.push_back({c.lo(), c.hi()});
    } else {
      out.atoms.push_back({c.position(), c.weight});
    }
  }
  return out;
}

}  // namespace tsgag
