#pragma once
// Real orthonormal spherical harmonics (no Condon-Shortley phase).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imcf {

// Associated Legendre function P_l^m(x), m >= 0, without the (-1)^m phase.
inline double assoc_legendre(int l, int m, double x) {
  if (m < 0 || m > l) return 0.0;
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= m; ++k) {
    pmm *= fact * s;
    fact += 2.0;
  }
  if (l == m) return pmm;
  double pm1 = x * (2 * m + 1) * pmm;
  if (l == m + 1) return pm1;
  double pl = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pl = (x * (2 * ll - 1) * pm1 - (ll + m - 1) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = pl;
  }
  return pl;
}

inline double ylm_normalization(int l, int m) {
  const int am = std::abs(m);
  double ratio = 1.0;  // (l-|m|)!/(l+|m|)!
  for (int k = l - am + 1; k <= l + am; ++k) ratio /= k;
  double n = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
  if (m != 0) n *= std::numbers::sqrt2;
  return n;
}

struct YlmValue {
  double value = 0.0;
  double d_theta = 0.0;
  double d_phi = 0.0;
};

// Y_lm with cos(m phi) for m > 0 and sin(|m| phi) for m < 0.
inline YlmValue real_ylm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("spherical harmonic index out of range");
  const int am = std::abs(m);
  const double x = std::cos(theta), st = std::sin(theta);
  const double n = ylm_normalization(l, m);
  const double p = assoc_legendre(l, am, x);
  const double dp = st > 0.0 ? (l * x * p - (l + am) * assoc_legendre(l - 1, am, x)) / st : 0.0;
  double ang = 1.0, dang = 0.0;
  if (m > 0) {
    ang = std::cos(m * phi);
    dang = -m * std::sin(m * phi);
  } else if (m < 0) {
    ang = std::sin(am * phi);
    dang = am * std::cos(am * phi);
  }
  return {n * p * ang, n * dp * ang, n * p * dang};
}

// Evaluate at a (not necessarily unit) Cartesian direction.
inline double real_ylm_dir(int l, int m, double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  const double theta = std::acos(std::clamp(z / r, -1.0, 1.0));
  const double phi = std::atan2(y, x);
  return real_ylm(l, m, theta, phi).value;
}

}  // namespace imcf
