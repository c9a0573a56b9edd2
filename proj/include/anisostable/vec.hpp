#ifndef ANISOSTABLE_VEC_HPP
#define ANISOSTABLE_VEC_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace astab {

// Point in R^d, d <= 3.  Unused trailing components stay zero, so norms and
// dot products may always run over all three slots.
using Vec = std::array<double, 3>;

inline Vec vec2(double x, double y) { return {x, y, 0.0}; }
inline Vec vec3(double x, double y, double z) { return {x, y, z}; }

inline double dot(const Vec& a, const Vec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec scale(const Vec& a, double k) { return {k * a[0], k * a[1], k * a[2]}; }
inline Vec neg(const Vec& a) { return {-a[0], -a[1], -a[2]}; }

inline double dist(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

inline Vec unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

// angle in [0, 2*pi) of a nonzero vector in the plane
inline double plane_angle(const Vec& a) {
    double t = std::atan2(a[1], a[0]);
    if (t < 0.0) t += 2.0 * M_PI;
    return t;
}

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

} // namespace astab

#endif
