#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gw/config_space.hpp"

namespace gw::knots {

using config::FramedConfig;
using config::Mat3;
using config::Vec3;

/// One polynomial piece: p(t) = sum_k coeff[dim][k] t^k on [t0, t1],
/// coefficients in the absolute parameter.
struct CubicSeg {
  double t0 = 0, t1 = 0;
  double coeff[3][4] = {};

  Vec3 eval(double t) const;
  Vec3 deriv(double t) const;
};

/// Framed long knot: piecewise-cubic path through the cube with pinned
/// endpoints f(+-1) = (+-1,0,0), f'(+-1) along +x, plus a piecewise-cubic
/// rotation-vector curve for the framing. Standard (axis, identity frame)
/// outside [-1,1]. The frame at t is the chart rotation aligned so its
/// first column is exactly the normalized derivative.
struct FramedKnot {
  std::vector<CubicSeg> path;
  std::vector<CubicSeg> framing;

  Vec3 f(double t) const;
  Vec3 df(double t) const;
  Mat3 frame(double t) const;

  /// Min pairwise distance over a parameter grid (injectivity probe).
  double min_separation(int resolution = 1000) const;

  nlohmann::json to_json() const;
  static FramedKnot from_json(const nlohmann::json& j);
};

FramedKnot straight_knot();
/// Hermite interpolant with x(t) = t, clamped flat ends, seeded wiggle.
FramedKnot random_knot(std::uint64_t seed, int segments = 5);
/// A long trefoil (genuinely knotted), fixed control data.
FramedKnot trefoil_knot();

/// Sample the knot and framing at weakly increasing times; collided points
/// take the tangent direction, sign fixed by a one-sided probe.
FramedConfig evaluate(const FramedKnot& k, const std::vector<double>& t);

/// Disjoint closed subintervals of [-1,1], strictly ordered.
struct IntervalFamily {
  std::vector<std::pair<double, double>> intervals;

  void validate() const;
  std::size_t size() const { return intervals.size(); }
  double scale(std::size_t i) const;
  double center(std::size_t i) const;
  /// affine map I -> L_i
  double fwd(std::size_t i, double s) const;
  /// piecewise-linear inverse, clamping outside L_i to -1/1
  double inv_clamped(std::size_t i, double t) const;
};

/// Little-intervals action: shrink each knot into its interval, axis
/// elsewhere; framings are unchanged by the shrinking.
FramedKnot act_on_knots(const IntervalFamily& ls,
                        const std::vector<FramedKnot>& ks);

}  // namespace gw::knots
