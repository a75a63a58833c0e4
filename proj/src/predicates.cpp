#include "sausage/predicates.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace sausage {

namespace {

using boost::multiprecision::cpp_int;

constexpr double kEps = 0x1.0p-53;
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;

// Writes every coordinate as an integer multiple of a common power of two.
template <std::size_t N>
std::array<cpp_int, N> to_common_integers(const std::array<double, N>& v, int* scale = nullptr) {
  int emin = std::numeric_limits<int>::max();
  std::array<long long, N> mant{};
  std::array<int, N> expo{};
  for (std::size_t i = 0; i < N; ++i) {
    if (v[i] == 0.0) continue;
    int e = 0;
    const double m = std::frexp(v[i], &e);
    mant[i] = static_cast<long long>(std::ldexp(m, 53));
    expo[i] = e - 53;
    emin = std::min(emin, expo[i]);
  }
  std::array<cpp_int, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (v[i] == 0.0) continue;
    out[i] = mant[i];
    out[i] <<= (expo[i] - emin);
  }
  if (scale) *scale = emin;
  return out;
}

int sign_of(const cpp_int& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

int orient2d_exact(const Point& a, const Point& b, const Point& c) {
  const auto z = to_common_integers<6>({a.x(), a.y(), b.x(), b.y(), c.x(), c.y()});
  const cpp_int det = (z[0] - z[4]) * (z[3] - z[5]) - (z[1] - z[5]) * (z[2] - z[4]);
  return sign_of(det);
}

double orient2d_value(const Point& a, const Point& b, const Point& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  // Outside this band the float form is good to 1e-12 relative.
  if (std::abs(det) > 1e12 * kCcwBound * (std::abs(detleft) + std::abs(detright))) return det;
  int e = 0;
  const auto z = to_common_integers<6>({a.x(), a.y(), b.x(), b.y(), c.x(), c.y()}, &e);
  if (e == std::numeric_limits<int>::max()) return 0.0;
  const cpp_int exact = (z[0] - z[4]) * (z[3] - z[5]) - (z[1] - z[5]) * (z[2] - z[4]);
  return std::ldexp(exact.convert_to<double>(), 2 * e);
}

int orient2d(const Point& a, const Point& b, const Point& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
  }
  const double bound = kCcwBound * detsum;
  if (det >= bound && det != 0.0) return 1;
  if (-det >= bound && det != 0.0) return -1;
  return orient2d_exact(a, b, c);
}

int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const auto z = to_common_integers<8>(
      {a.x(), a.y(), b.x(), b.y(), c.x(), c.y(), d.x(), d.y()});
  const cpp_int adx = z[0] - z[6], ady = z[1] - z[7];
  const cpp_int bdx = z[2] - z[6], bdy = z[3] - z[7];
  const cpp_int cdx = z[4] - z[6], cdy = z[5] - z[7];
  const cpp_int alift = adx * adx + ady * ady;
  const cpp_int blift = bdx * bdx + bdy * bdy;
  const cpp_int clift = cdx * cdx + cdy * cdy;
  const cpp_int det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                      clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIccBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return incircle_exact(a, b, c, d);
}

}  // namespace sausage
