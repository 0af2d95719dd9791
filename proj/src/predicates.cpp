#include <cmath>

#include <gmpxx.h>

#include "itt/filtration.hpp"

namespace itt {
namespace {

template <class T>
T det3(const T m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class T>
T det4(const T m[4][4]) {
  T total = 0;
  for (int col = 0; col < 4; ++col) {
    T minor[3][3];
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c = 0; c < 4; ++c) {
        if (c == col) continue;
        minor[r - 1][cc++] = m[r][c];
      }
    }
    const T term = m[0][col] * det3(minor);
    if (col % 2 == 0) total += term;
    else total -= term;
  }
  return total;
}

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

int orient_exact(Vec3 a, Vec3 b, Vec3 c, Vec3 d) {
  mpq_class m[3][3];
  const Vec3 rows[3] = {b, c, d};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) m[r][k] = mpq_class(rows[r][k]) - mpq_class(a[k]);
  return sign_of(det3(m));
}

int in_sphere_exact(const Vec3 p[4], Vec3 e) {
  mpq_class m[4][4];
  for (int r = 0; r < 4; ++r) {
    mpq_class lift = 0;
    for (int k = 0; k < 3; ++k) {
      m[r][k] = mpq_class(p[r][k]) - mpq_class(e[k]);
      lift += m[r][k] * m[r][k];
    }
    m[r][3] = lift;
  }
  return -sign_of(det4(m));
}

}  // namespace

// Long double evaluation with a conservative error bound; ties and near-ties
// fall through to rational arithmetic.
int orient3d(Vec3 a, Vec3 b, Vec3 c, Vec3 d) {
  long double m[3][3], abs_m[3][3];
  const Vec3 rows[3] = {b, c, d};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      m[r][k] = static_cast<long double>(rows[r][k]) - static_cast<long double>(a[k]);
      abs_m[r][k] = std::fabs(m[r][k]);
    }
  }
  const long double det = det3(m);
  const long double perm = abs_m[0][0] * (abs_m[1][1] * abs_m[2][2] + abs_m[1][2] * abs_m[2][1]) +
                           abs_m[0][1] * (abs_m[1][0] * abs_m[2][2] + abs_m[1][2] * abs_m[2][0]) +
                           abs_m[0][2] * (abs_m[1][0] * abs_m[2][1] + abs_m[1][1] * abs_m[2][0]);
  if (std::fabs(det) > 1e-17L * perm) return det > 0 ? 1 : -1;
  return orient_exact(a, b, c, d);
}

int in_sphere(Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 e) {
  const Vec3 p[4] = {a, b, c, d};
  long double m[4][4], abs_m[4][4];
  for (int r = 0; r < 4; ++r) {
    long double lift = 0;
    for (int k = 0; k < 3; ++k) {
      m[r][k] = static_cast<long double>(p[r][k]) - static_cast<long double>(e[k]);
      abs_m[r][k] = std::fabs(m[r][k]);
      lift += m[r][k] * m[r][k];
    }
    m[r][3] = lift;
    abs_m[r][3] = lift;
  }
  const long double det = det4(m);
  // Permanent of the absolute matrix bounds the magnitude of every product.
  long double perm = 0;
  for (int col = 0; col < 4; ++col) {
    long double minor[3][3];
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c = 0; c < 4; ++c) {
        if (c == col) continue;
        minor[r - 1][cc++] = abs_m[r][c];
      }
    }
    perm += abs_m[0][col] * (minor[0][0] * (minor[1][1] * minor[2][2] + minor[1][2] * minor[2][1]) +
                             minor[0][1] * (minor[1][0] * minor[2][2] + minor[1][2] * minor[2][0]) +
                             minor[0][2] * (minor[1][0] * minor[2][1] + minor[1][1] * minor[2][0]));
  }
  if (std::fabs(det) > 1e-16L * perm) return det < 0 ? 1 : -1;
  return in_sphere_exact(p, e);
}

}  // namespace itt
