#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gw/knots.hpp"

namespace gw::aligned {

using config::FramedConfig;
using knots::FramedKnot;
using knots::IntervalFamily;

/// A sampled aligned map: a callable on weakly increasing tuples in the
/// simplex, valued in boundary-carrying framed configurations.
using AlignedMap = std::function<FramedConfig(const std::vector<double>&)>;

/// ev_n of a framed knot as a sampler.
AlignedMap ev_sampler(const FramedKnot& k, int n);

/// Little-intervals action at sample points: block points come from the
/// restricted maps, uncovered times sit on the axis, coincident axis points
/// collide along the x direction.
FramedConfig act_on_samples(const IntervalFamily& ls,
                            const std::vector<AlignedMap>& phis,
                            const std::vector<double>& t);

AlignedMap act_sampler(const IntervalFamily& ls,
                       const std::vector<AlignedMap>& phis);

/// Tower map p_n at sample level: evaluate at (t, 1) and forget the last
/// interior point and framing.
AlignedMap restriction_projection(const AlignedMap& phi, int n);

struct CheckRow {
  std::string name;
  std::uint64_t seed = 0;
  double max_error = 0;
};

struct CheckOptions {
  std::uint64_t seed = 42;
  int samples = 1000;
  int max_n = 6;
  double tol = 1e-9;
  int threads = 1;
  const FramedKnot* knot = nullptr;  // optional file-supplied knot
};

/// Runs the numeric identity checks (cosimplicial identities, insertion
/// associativity, projection/evaluation compatibility, equivariance,
/// straight-line baseline). Deterministic for fixed options, independent of
/// thread count.
std::vector<CheckRow> run_config_checks(const CheckOptions& opt);

std::string checks_to_csv(const std::vector<CheckRow>& rows);

}  // namespace gw::aligned
