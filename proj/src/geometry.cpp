#include "itt/geometry.hpp"

namespace itt {

Mat3 Mat3::inverse() const {
  const Vec3 c0 = cross(rows[1], rows[2]);
  const Vec3 c1 = cross(rows[2], rows[0]);
  const Vec3 c2 = cross(rows[0], rows[1]);
  const double inv_det = 1.0 / dot(rows[0], c0);
  // Columns of the inverse are the scaled cofactor rows.
  return Mat3{{Vec3{c0.x, c1.x, c2.x} * inv_det, Vec3{c0.y, c1.y, c2.y} * inv_det,
               Vec3{c0.z, c1.z, c2.z} * inv_det}};
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  const Mat3 bt = b.transposed();
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i][j] = dot(a[i], bt[j]);
  }
  return out;
}

}  // namespace itt
