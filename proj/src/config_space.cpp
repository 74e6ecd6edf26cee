#include "gw/config_space.hpp"

#include <atomic>
#include <stdexcept>

namespace gw::config {

namespace {
std::atomic<std::uint64_t> g_reortho{0};
}

std::uint64_t reortho_count() { return g_reortho.load(); }
void reset_reortho_count() { g_reortho.store(0); }

Vec3 Vec3::normalized() const {
  double l = norm();
  if (l == 0) throw std::domain_error("normalizing zero vector");
  return {x / l, y / l, z / l};
}

Mat3 Mat3::transposed() const {
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.a[i][j] = a[j][i];
  return t;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * o.a[k][j];
      r.a[i][j] = s;
    }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
          a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
          a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
}

double Mat3::orthogonality_error() const {
  Mat3 g = transposed() * (*this);
  double e = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double target = i == j ? 1.0 : 0.0;
      e = std::max(e, std::fabs(g.a[i][j] - target));
    }
  return e;
}

Mat3 reorthonormalize(const Mat3& m) {
  Vec3 c0 = m.col(0).normalized();
  Vec3 c1 = m.col(1) - c0 * c0.dot(m.col(1));
  c1 = c1.normalized();
  Vec3 c2 = m.col(2) - c0 * c0.dot(m.col(2)) - c1 * c1.dot(m.col(2));
  c2 = c2.normalized();
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    r.a[i][0] = (&c0.x)[i];
    r.a[i][1] = (&c1.x)[i];
    r.a[i][2] = (&c2.x)[i];
  }
  return r;
}

Mat3 rotation_from_vector(const Vec3& r) {
  double th = r.norm();
  if (th < 1e-300) return Mat3::identity();
  Vec3 k = r * (1.0 / th);
  double c = std::cos(th), s = std::sin(th), v = 1 - c;
  Mat3 m;
  m.a[0][0] = c + k.x * k.x * v;
  m.a[0][1] = k.x * k.y * v - k.z * s;
  m.a[0][2] = k.x * k.z * v + k.y * s;
  m.a[1][0] = k.y * k.x * v + k.z * s;
  m.a[1][1] = c + k.y * k.y * v;
  m.a[1][2] = k.y * k.z * v - k.x * s;
  m.a[2][0] = k.z * k.x * v - k.y * s;
  m.a[2][1] = k.z * k.y * v + k.x * s;
  m.a[2][2] = c + k.z * k.z * v;
  return m;
}

Mat3 minimal_rotation(const Vec3& from, const Vec3& to) {
  Vec3 axis = from.cross(to);
  double s = axis.norm();
  double c = from.dot(to);
  if (s < 1e-14) {
    if (c > 0) return Mat3::identity();
    // antipodal: rotate pi about a deterministic perpendicular
    Vec3 perp = std::fabs(from.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    perp = (perp - from * from.dot(perp)).normalized();
    return rotation_from_vector(perp * M_PI);
  }
  double angle = std::atan2(s, c);
  return rotation_from_vector(axis * (angle / s));
}

namespace {

Mat3 guarded(const Mat3& m) {
  if (m.orthogonality_error() > kFrameDrift) {
    ++g_reortho;
    return reorthonormalize(m);
  }
  return m;
}

void require_orthogonal(const Mat3& m, const char* what) {
  if (m.orthogonality_error() > 1e-6)
    throw std::invalid_argument(std::string("non-orthogonal frame input: ") +
                                what);
}

}  // namespace

std::size_t FramedConfig::uindex(int i, int j, int total) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= total || i == j)
    throw std::out_of_range("u index out of range");
  return static_cast<std::size_t>(i) * (2 * total - i - 1) / 2 + (j - i - 1);
}

void FramedConfig::allocate() {
  int t = slots();
  x.assign(t, Vec3{});
  u.assign(static_cast<std::size_t>(t) * (t - 1) / 2, Vec3{});
  frames.assign(t, Mat3::identity());
}

std::size_t InfConfig::uindex(int i, int j, int total) {
  return FramedConfig::uindex(i, j, total);
}

void InfConfig::allocate() {
  u.assign(static_cast<std::size_t>(n) * (n - 1) / 2, Vec3{});
  frames.assign(n, Mat3::identity());
}

InfConfig standard_mu() {
  InfConfig d;
  d.n = 2;
  d.allocate();
  d.set_u(0, 1, Vec3{-1, 0, 0});
  return d;
}

FramedConfig insert(const FramedConfig& c, int i, const InfConfig& d) {
  if (!c.boundary)
    throw std::invalid_argument("insert: configuration must carry boundary");
  if (i < 1 || i > c.n) throw std::out_of_range("insert: index out of range");
  for (const Mat3& f : c.frames) require_orthogonal(f, "outer");
  for (const Mat3& f : d.frames) require_orthogonal(f, "inserted");

  const int m = d.n;
  FramedConfig r;
  r.n = c.n + m - 1;
  r.boundary = true;
  r.allocate();

  const int rs = r.slots();
  // result slot -> source slot (boundary slots included); the inserted block
  // occupies result slots i .. i+m-1 and maps to source slot i
  auto hat = [&](int slot) {
    if (slot <= i) return slot;
    if (slot <= i + m - 1) return i;
    return slot - m + 1;
  };
  auto in_block = [&](int slot) { return slot >= i && slot <= i + m - 1; };

  const Mat3& rot = c.frames[i];
  for (int s = 0; s < rs; ++s) {
    r.x[s] = c.x[hat(s)];
    if (in_block(s))
      r.frames[s] = guarded(rot * d.frames[s - i]);
    else
      r.frames[s] = c.frames[hat(s)];
  }
  for (int s = 0; s < rs; ++s)
    for (int t = s + 1; t < rs; ++t) {
      if (in_block(s) && in_block(t))
        r.set_u(s, t, rot * d.uvec(s - i, t - i));
      else
        r.set_u(s, t, c.uvec(hat(s), hat(t)));
    }
  return r;
}

InfConfig insert_inf(const InfConfig& c, int i, const InfConfig& d) {
  if (i < 1 || i > c.n) throw std::out_of_range("insert_inf: index");
  for (const Mat3& f : c.frames) require_orthogonal(f, "outer");
  for (const Mat3& f : d.frames) require_orthogonal(f, "inserted");

  const int m = d.n;
  InfConfig r;
  r.n = c.n + m - 1;
  r.allocate();

  auto hat = [&](int p) {  // 0-based points
    if (p < i) return p;
    if (p <= i + m - 2) return i - 1;
    return p - m + 1;
  };
  auto in_block = [&](int p) { return p >= i - 1 && p <= i + m - 2; };

  const Mat3& rot = c.frames[i - 1];
  for (int p = 0; p < r.n; ++p)
    r.frames[p] =
        in_block(p) ? guarded(rot * d.frames[p - (i - 1)]) : c.frames[hat(p)];
  for (int p = 0; p < r.n; ++p)
    for (int q = p + 1; q < r.n; ++q) {
      if (in_block(p) && in_block(q))
        r.set_u(p, q, rot * d.uvec(p - (i - 1), q - (i - 1)));
      else
        r.set_u(p, q, c.uvec(hat(p), hat(q)));
    }
  return r;
}

FramedConfig coface(int i, const FramedConfig& c) {
  if (!c.boundary) throw std::invalid_argument("coface: boundary required");
  if (i < 0 || i > c.n + 1) throw std::out_of_range("coface index");

  // double slot i: the copy goes right after it, except that doubling the
  // right boundary inserts the new interior point before y1
  const int rs = c.slots() + 1;
  const int first = i;  // slot of the first of the pair in the result
  FramedConfig r;
  r.n = c.n + 1;
  r.boundary = true;
  r.allocate();

  auto hat = [&](int s) { return s <= first ? s : s - 1; };
  for (int s = 0; s < rs; ++s) {
    r.x[s] = c.x[hat(s)];
    r.frames[s] = c.frames[hat(s)];
  }
  for (int s = 0; s < rs; ++s)
    for (int t = s + 1; t < rs; ++t) {
      if (s == first && t == first + 1)
        r.set_u(s, t, c.frames[i] * Vec3{-1, 0, 0});
      else
        r.set_u(s, t, c.uvec(hat(s), hat(t)));
    }
  return r;
}

FramedConfig codegeneracy(int i, const FramedConfig& c) {
  if (!c.boundary) throw std::invalid_argument("codegeneracy: boundary required");
  if (i < 1 || i > c.n) throw std::out_of_range("codegeneracy index");

  FramedConfig r;
  r.n = c.n - 1;
  r.boundary = true;
  r.allocate();
  auto hat = [&](int s) { return s < i ? s : s + 1; };
  for (int s = 0; s < r.slots(); ++s) {
    r.x[s] = c.x[hat(s)];
    r.frames[s] = c.frames[hat(s)];
  }
  for (int s = 0; s < r.slots(); ++s)
    for (int t = s + 1; t < r.slots(); ++t)
      r.set_u(s, t, c.uvec(hat(s), hat(t)));
  return r;
}

InfConfig coface_inf(int i, const InfConfig& c) {
  if (i < 0 || i > c.n + 1) throw std::out_of_range("coface index");
  if (i == 0) return insert_inf(standard_mu(), 2, c);
  if (i == c.n + 1) return insert_inf(standard_mu(), 1, c);
  return insert_inf(c, i, standard_mu());
}

InfConfig codegeneracy_inf(int i, const InfConfig& c) {
  if (i < 1 || i > c.n) throw std::out_of_range("codegeneracy index");
  InfConfig r;
  r.n = c.n - 1;
  r.allocate();
  auto hat = [&](int p) { return p < i - 1 ? p : p + 1; };
  for (int p = 0; p < r.n; ++p) r.frames[p] = c.frames[hat(p)];
  for (int p = 0; p < r.n; ++p)
    for (int q = p + 1; q < r.n; ++q)
      r.set_u(p, q, c.uvec(hat(p), hat(q)));
  return r;
}

double consistency_error(const FramedConfig& c) {
  double e = 0;
  const int t = c.slots();
  for (int i = 0; i < t; ++i)
    e = std::max(e, c.frames[i].orthogonality_error());
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) {
      Vec3 d = c.x[i] - c.x[j];
      if (d.norm() > kCollisionDelta) {
        Vec3 expect = d.normalized();
        e = std::max(e, (c.uvec(i, j) - expect).norm());
      } else {
        e = std::max(e, std::fabs(c.uvec(i, j).norm() - 1.0));
      }
    }
  if (c.boundary && t >= 2) {
    e = std::max(e, (c.x[0] - Vec3{-1, 0, 0}).norm());
    e = std::max(e, (c.x[t - 1] - Vec3{1, 0, 0}).norm());
  }
  return e;
}

double max_abs_diff(const FramedConfig& a, const FramedConfig& b) {
  if (a.n != b.n || a.boundary != b.boundary) return 1e300;
  double e = 0;
  for (std::size_t k = 0; k < a.x.size(); ++k)
    e = std::max(e, (a.x[k] - b.x[k]).norm());
  for (std::size_t k = 0; k < a.u.size(); ++k)
    e = std::max(e, (a.u[k] - b.u[k]).norm());
  for (std::size_t k = 0; k < a.frames.size(); ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        e = std::max(e, std::fabs(a.frames[k].a[i][j] - b.frames[k].a[i][j]));
  return e;
}

double max_abs_diff(const InfConfig& a, const InfConfig& b) {
  if (a.n != b.n) return 1e300;
  double e = 0;
  for (std::size_t k = 0; k < a.u.size(); ++k)
    e = std::max(e, (a.u[k] - b.u[k]).norm());
  for (std::size_t k = 0; k < a.frames.size(); ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        e = std::max(e, std::fabs(a.frames[k].a[i][j] - b.frames[k].a[i][j]));
  return e;
}

}  // namespace gw::config
