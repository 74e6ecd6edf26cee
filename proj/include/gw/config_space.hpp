#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace gw::config {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const;
};

struct Mat3 {
  double a[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  static Mat3 identity() { return {}; }
  Vec3 col(int j) const { return {a[0][j], a[1][j], a[2][j]}; }
  Mat3 transposed() const;
  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  /// max |A^T A - I| entry
  double orthogonality_error() const;
};

/// Gram-Schmidt on columns.
Mat3 reorthonormalize(const Mat3& m);
/// Rotation by Rodrigues' formula from a rotation vector.
Mat3 rotation_from_vector(const Vec3& r);
/// Minimal rotation taking unit vector `from` to unit vector `to`.
Mat3 minimal_rotation(const Vec3& from, const Vec3& to);

/// Count of frame re-orthonormalizations applied (drift above 1e-10).
std::uint64_t reortho_count();
void reset_reortho_count();

inline constexpr double kCollisionDelta = 1e-8;   // collided vs distinct
inline constexpr double kFrameDrift = 1e-10;      // reorthonormalize above this

/// Point of a compactified framed configuration space. With `boundary`, the
/// arrays include the two pinned endpoint configurations y0 = (-1,0,0) and
/// y1 = (1,0,0) (identity frames) at the front and back; `n` counts interior
/// points only. u vectors are stored for i < j as (x_i - x_j)/|x_i - x_j|,
/// so knot-ordered collisions carry u = -tangent.
struct FramedConfig {
  int n = 0;
  bool boundary = false;
  std::vector<Vec3> x;
  std::vector<Vec3> u;  // packed upper triangle over all slots
  std::vector<Mat3> frames;

  int slots() const { return n + (boundary ? 2 : 0); }
  static std::size_t uindex(int i, int j, int total);
  const Vec3& uvec(int i, int j) const { return u[uindex(i, j, slots())]; }
  void set_u(int i, int j, const Vec3& v) { u[uindex(i, j, slots())] = v; }
  void allocate();
};

/// Configuration modulo translation and positive scaling: u vectors and
/// frames only.
struct InfConfig {
  int n = 0;
  std::vector<Vec3> u;
  std::vector<Mat3> frames;

  static std::size_t uindex(int i, int j, int total);
  const Vec3& uvec(int i, int j) const { return u[uindex(i, j, n)]; }
  void set_u(int i, int j, const Vec3& v) { u[uindex(i, j, n)] = v; }
  void allocate();
};

/// The infinitesimal two-point configuration used by the doubling maps:
/// u_12 = (-1,0,0) (knot order), identity frames.
InfConfig standard_mu();

/// Insert `d` at the i-th interior point of `c` (1-based); the inserted
/// block collapses spatially to x_i, inner directions and frames rotated by
/// the i-th frame.
FramedConfig insert(const FramedConfig& c, int i, const InfConfig& d);
/// Operadic insertion on infinitesimal configurations.
InfConfig insert_inf(const InfConfig& c, int i, const InfConfig& d);

/// Spatial model structure maps; coface doubles a point (0 and n+1 double
/// the boundary points), codegeneracy forgets one.
FramedConfig coface(int i, const FramedConfig& c);
FramedConfig codegeneracy(int i, const FramedConfig& c);

/// Operadic model structure maps: d^0(x) = mu o_2 x, d^{n+1}(x) = mu o_1 x.
InfConfig coface_inf(int i, const InfConfig& c);
InfConfig codegeneracy_inf(int i, const InfConfig& c);

/// Max violation of the u-consistency and frame-orthogonality invariants.
double consistency_error(const FramedConfig& c);

double max_abs_diff(const FramedConfig& a, const FramedConfig& b);
double max_abs_diff(const InfConfig& a, const InfConfig& b);

}  // namespace gw::config
