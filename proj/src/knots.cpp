#include "gw/knots.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gw::knots {

Vec3 CubicSeg::eval(double t) const {
  Vec3 p;
  double* out = &p.x;
  for (int d = 0; d < 3; ++d)
    out[d] = ((coeff[d][3] * t + coeff[d][2]) * t + coeff[d][1]) * t +
             coeff[d][0];
  return p;
}

Vec3 CubicSeg::deriv(double t) const {
  Vec3 p;
  double* out = &p.x;
  for (int d = 0; d < 3; ++d)
    out[d] = (3 * coeff[d][3] * t + 2 * coeff[d][2]) * t + coeff[d][1];
  return p;
}

namespace {

const CubicSeg* locate(const std::vector<CubicSeg>& segs, double t) {
  for (const CubicSeg& s : segs)
    if (t <= s.t1) return &s;
  return segs.empty() ? nullptr : &segs.back();
}

}  // namespace

Vec3 FramedKnot::f(double t) const {
  if (t < -1 || t > 1 || path.empty()) return {t, 0, 0};
  return locate(path, t)->eval(t);
}

Vec3 FramedKnot::df(double t) const {
  if (t < -1 || t > 1 || path.empty()) return {1, 0, 0};
  return locate(path, t)->deriv(t);
}

Mat3 FramedKnot::frame(double t) const {
  Vec3 e1 = df(t).normalized();
  Vec3 r = (t < -1 || t > 1 || framing.empty()) ? Vec3{}
                                                : locate(framing, t)->eval(t);
  Mat3 chart = config::rotation_from_vector(r);
  Mat3 aligned = config::minimal_rotation(chart.col(0), e1) * chart;
  if (aligned.orthogonality_error() > config::kFrameDrift)
    aligned = config::reorthonormalize(aligned);
  return aligned;
}

double FramedKnot::min_separation(int resolution) const {
  double best = 1e300;
  std::vector<Vec3> pts(resolution + 1);
  for (int i = 0; i <= resolution; ++i)
    pts[i] = f(-1.0 + 2.0 * i / resolution);
  for (int i = 0; i <= resolution; ++i)
    for (int j = i + 2; j <= resolution; ++j)
      best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

nlohmann::json FramedKnot::to_json() const {
  auto segs_to_json = [](const std::vector<CubicSeg>& segs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CubicSeg& s : segs) {
      nlohmann::json coeffs = nlohmann::json::array();
      for (int d = 0; d < 3; ++d)
        coeffs.push_back({s.coeff[d][0], s.coeff[d][1], s.coeff[d][2],
                          s.coeff[d][3]});
      arr.push_back({{"t0", s.t0}, {"t1", s.t1}, {"coeffs", coeffs}});
    }
    return arr;
  };
  return nlohmann::json{{"segments", segs_to_json(path)},
                        {"framing", {{"segments", segs_to_json(framing)}}}};
}

FramedKnot FramedKnot::from_json(const nlohmann::json& j) {
  auto segs_from_json = [](const nlohmann::json& arr) {
    std::vector<CubicSeg> segs;
    for (const auto& e : arr) {
      CubicSeg s;
      s.t0 = e.at("t0").get<double>();
      s.t1 = e.at("t1").get<double>();
      const auto& coeffs = e.at("coeffs");
      for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 4; ++k)
          s.coeff[d][k] = coeffs.at(d).at(k).get<double>();
      segs.push_back(s);
    }
    return segs;
  };
  FramedKnot k;
  k.path = segs_from_json(j.at("segments"));
  if (j.contains("framing"))
    k.framing = segs_from_json(j.at("framing").at("segments"));
  if (k.path.empty()) throw std::invalid_argument("knot file has no segments");
  return k;
}

namespace {

// Hermite piece on [a,b] with values p0,p1 and absolute-parameter slopes
// m0,m1, converted to power-basis coefficients in t.
void hermite_coeffs(double a, double b, double p0, double p1, double m0,
                    double m1, double out[4]) {
  double h = b - a;
  // local s in [0,1]: p(s) = p0 h00 + h m0 h10 + p1 h01 + h m1 h11
  double c0 = p0;
  double c1 = h * m0;
  double c2 = -3 * p0 - 2 * h * m0 + 3 * p1 - h * m1;
  double c3 = 2 * p0 + h * m0 - 2 * p1 + h * m1;
  // s = (t-a)/h; expand into powers of t
  double inv = 1.0 / h;
  double k1 = inv, k0 = -a * inv;
  // powers of (k1 t + k0)
  double s1[2] = {k0, k1};
  double s2[3] = {k0 * k0, 2 * k0 * k1, k1 * k1};
  double s3[4] = {k0 * k0 * k0, 3 * k0 * k0 * k1, 3 * k0 * k1 * k1,
                  k1 * k1 * k1};
  out[0] = c0 + c1 * s1[0] + c2 * s2[0] + c3 * s3[0];
  out[1] = c1 * s1[1] + c2 * s2[1] + c3 * s3[1];
  out[2] = c2 * s2[2] + c3 * s3[2];
  out[3] = c3 * s3[3];
}

std::vector<CubicSeg> hermite_curve(const std::vector<double>& grid,
                                    const std::vector<Vec3>& values,
                                    const std::vector<Vec3>& slopes) {
  std::vector<CubicSeg> segs;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    CubicSeg s;
    s.t0 = grid[i];
    s.t1 = grid[i + 1];
    const double* p0 = &values[i].x;
    const double* p1 = &values[i + 1].x;
    const double* m0 = &slopes[i].x;
    const double* m1 = &slopes[i + 1].x;
    for (int d = 0; d < 3; ++d)
      hermite_coeffs(s.t0, s.t1, p0[d], p1[d], m0[d], m1[d], s.coeff[d]);
    segs.push_back(s);
  }
  return segs;
}

}  // namespace

FramedKnot straight_knot() {
  FramedKnot k;
  CubicSeg s;
  s.t0 = -1;
  s.t1 = 1;
  s.coeff[0][1] = 1;  // x = t
  k.path.push_back(s);
  CubicSeg fr;
  fr.t0 = -1;
  fr.t1 = 1;
  k.framing.push_back(fr);
  return k;
}

FramedKnot random_knot(std::uint64_t seed, int segments) {
  if (segments < 1) throw std::invalid_argument("random_knot: segments >= 1");
  std::mt19937_64 rng(seed);
  auto unif = [&](double lo, double hi) {
    double v = (rng() >> 11) * 0x1.0p-53;
    return lo + v * (hi - lo);
  };

  int k = segments;
  std::vector<double> grid(k + 1);
  for (int i = 0; i <= k; ++i) grid[i] = -1.0 + 2.0 * i / k;

  std::vector<Vec3> pts(k + 1), slopes(k + 1);
  for (int i = 0; i <= k; ++i) {
    // x(t) = t exactly keeps the curve graph-like, hence embedded
    pts[i].x = grid[i];
    slopes[i].x = 1;
  }
  for (int i = 1; i < k; ++i) {
    pts[i].y = unif(-0.5, 0.5);
    pts[i].z = unif(-0.5, 0.5);
  }
  for (int i = 1; i < k; ++i) {
    slopes[i].y = (pts[i + 1].y - pts[i - 1].y) / (grid[i + 1] - grid[i - 1]);
    slopes[i].z = (pts[i + 1].z - pts[i - 1].z) / (grid[i + 1] - grid[i - 1]);
  }

  FramedKnot knot;
  knot.path = hermite_curve(grid, pts, slopes);

  std::vector<Vec3> rv(k + 1), rs(k + 1);
  for (int i = 1; i < k; ++i)
    rv[i] = {unif(-1, 1), unif(-1, 1), unif(-1, 1)};
  for (int i = 1; i < k; ++i)
    rs[i] = (rv[i + 1] - rv[i - 1]) * (1.0 / (grid[i + 1] - grid[i - 1]));
  knot.framing = hermite_curve(grid, rv, rs);
  return knot;
}

FramedKnot trefoil_knot() {
  // long trefoil: open (2,3) torus knot rescaled into the cube, closed up
  // through the axis endpoints
  const int k = 12;
  std::vector<double> grid(k + 1);
  std::vector<Vec3> pts(k + 1), slopes(k + 1);
  for (int i = 0; i <= k; ++i) grid[i] = -1.0 + 2.0 * i / k;
  pts[0] = {-1, 0, 0};
  pts[k] = {1, 0, 0};
  slopes[0] = slopes[k] = {1, 0, 0};
  for (int i = 1; i < k; ++i) {
    double s = M_PI * (2.0 * i / k - 1.0);  // (-pi, pi)
    double x = 0.35 * (std::sin(s) + 2 * std::sin(2 * s));
    double y = 0.3 * (std::cos(s) - 2 * std::cos(2 * s)) + 0.3;
    double z = -0.35 * std::sin(3 * s);
    pts[i] = {0.75 * (2.0 * i / k - 1.0) + 0.25 * x, y, z};
  }
  for (int i = 1; i < k; ++i)
    slopes[i] = (pts[i + 1] - pts[i - 1]) * (1.0 / (grid[i + 1] - grid[i - 1]));

  FramedKnot knot;
  knot.path = hermite_curve(grid, pts, slopes);
  std::vector<Vec3> rv(k + 1), rs(k + 1);
  knot.framing = hermite_curve(grid, rv, rs);
  return knot;
}

FramedConfig evaluate(const FramedKnot& k, const std::vector<double>& t) {
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i] > t[i + 1])
      throw std::invalid_argument("evaluate: times must be nondecreasing");

  const int n = static_cast<int>(t.size());
  FramedConfig c;
  c.n = n;
  c.boundary = true;
  c.allocate();
  c.x[0] = {-1, 0, 0};
  c.x[n + 1] = {1, 0, 0};
  for (int i = 1; i <= n; ++i) {
    c.x[i] = k.f(t[i - 1]);
    c.frames[i] = k.frame(t[i - 1]);
  }

  auto time_of = [&](int slot) {
    if (slot == 0) return -1.0;
    if (slot == n + 1) return 1.0;
    return t[slot - 1];
  };

  for (int i = 0; i < c.slots(); ++i)
    for (int j = i + 1; j < c.slots(); ++j) {
      Vec3 d = c.x[i] - c.x[j];
      if (d.norm() > config::kCollisionDelta) {
        c.set_u(i, j, d.normalized());
      } else {
        // collided: tangent direction with a one-sided probe for the sign
        double ti = time_of(i);
        Vec3 tangent = k.df(ti).normalized();
        double h = 1e-6;
        Vec3 probe = k.f(ti) - k.f(ti + h);
        double sign = probe.dot(tangent) < 0 ? -1.0 : 1.0;
        c.set_u(i, j, tangent * sign);
      }
    }
  return c;
}

void IntervalFamily::validate() const {
  double prev = -1;
  for (const auto& [a, b] : intervals) {
    if (a < -1 || b > 1 || a >= b)
      throw std::invalid_argument("interval family: bad interval");
    if (a < prev)
      throw std::invalid_argument("interval family: overlapping intervals");
    prev = b;
  }
}

double IntervalFamily::scale(std::size_t i) const {
  return (intervals[i].second - intervals[i].first) / 2;
}
double IntervalFamily::center(std::size_t i) const {
  return (intervals[i].second + intervals[i].first) / 2;
}
double IntervalFamily::fwd(std::size_t i, double s) const {
  return center(i) + scale(i) * s;
}
double IntervalFamily::inv_clamped(std::size_t i, double t) const {
  double s = (t - center(i)) / scale(i);
  return std::clamp(s, -1.0, 1.0);
}

namespace {

// q(t) = p((t - c)/s) for a cubic p, expanded in powers of t
void recompose(const double in[4], double c, double s, double out[4]) {
  double k1 = 1.0 / s, k0 = -c / s;
  double s1[2] = {k0, k1};
  double s2[3] = {k0 * k0, 2 * k0 * k1, k1 * k1};
  double s3[4] = {k0 * k0 * k0, 3 * k0 * k0 * k1, 3 * k0 * k1 * k1,
                  k1 * k1 * k1};
  out[0] = in[0] + in[1] * s1[0] + in[2] * s2[0] + in[3] * s3[0];
  out[1] = in[1] * s1[1] + in[2] * s2[1] + in[3] * s3[1];
  out[2] = in[2] * s2[2] + in[3] * s3[2];
  out[3] = in[3] * s3[3];
}

CubicSeg axis_segment(double t0, double t1) {
  CubicSeg s;
  s.t0 = t0;
  s.t1 = t1;
  s.coeff[0][1] = 1;  // (t, 0, 0)
  return s;
}

CubicSeg zero_segment(double t0, double t1) {
  CubicSeg s;
  s.t0 = t0;
  s.t1 = t1;
  return s;
}

}  // namespace

FramedKnot act_on_knots(const IntervalFamily& ls,
                        const std::vector<FramedKnot>& ks) {
  ls.validate();
  if (ls.size() != ks.size())
    throw std::invalid_argument("act_on_knots: interval/knot count mismatch");

  FramedKnot out;
  double cursor = -1;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto [a, b] = ls.intervals[i];
    if (cursor < a) {
      out.path.push_back(axis_segment(cursor, a));
      out.framing.push_back(zero_segment(cursor, a));
    }
    double s = ls.scale(i), c = ls.center(i);
    for (const CubicSeg& seg : ks[i].path) {
      CubicSeg ns;
      ns.t0 = ls.fwd(i, seg.t0);
      ns.t1 = ls.fwd(i, seg.t1);
      // Lhat o f o L^{-1}: first coordinate re-affined, all shrunk by s
      double composed[3][4];
      for (int d = 0; d < 3; ++d) recompose(seg.coeff[d], c, s, composed[d]);
      for (int d = 0; d < 3; ++d)
        for (int p = 0; p < 4; ++p) ns.coeff[d][p] = s * composed[d][p];
      ns.coeff[0][0] += c;
      out.path.push_back(ns);
    }
    for (const CubicSeg& seg : ks[i].framing) {
      CubicSeg ns;
      ns.t0 = ls.fwd(i, seg.t0);
      ns.t1 = ls.fwd(i, seg.t1);
      for (int d = 0; d < 3; ++d) recompose(seg.coeff[d], c, s, ns.coeff[d]);
      out.framing.push_back(ns);
    }
    cursor = b;
  }
  if (cursor < 1) {
    out.path.push_back(axis_segment(cursor, 1));
    out.framing.push_back(zero_segment(cursor, 1));
  }
  return out;
}

}  // namespace gw::knots
