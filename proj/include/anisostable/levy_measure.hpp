#ifndef ANISOSTABLE_LEVY_MEASURE_HPP
#define ANISOSTABLE_LEVY_MEASURE_HPP

#include <optional>

#include "anisostable/spectral_measure.hpp"
#include "anisostable/vec.hpp"

namespace astab {

// nu(B(x, r)) for the Levy measure nu(ds dxi) = s^{-1-alpha} ds mu(dxi).
// Atomic mu: per-ray closed form.  Density mu (d = 2): angular quadrature
// with tangency-split cells.  Returns +infinity when the ball encloses the
// origin (|x| <= r).
double nu_ball(const ModelParams& m, const Vec& x, double r);

// nu(B(0, R)^c) = |mu| R^{-alpha} / alpha.
double nu_tail(const ModelParams& m, double R);

// Integral of |z - x|^{-a} over B(x, rho) against nu, evaluated by the
// dyadic-shell sum with geometric-mean shell weights.  Requires
// 0 < a < gamma and 0 < rho < |x|/2.
double nu_singular_integral(const ModelParams& m, const Vec& x, double rho, double a);

// The s-interval {s > 0 : |s*xi - x| < r} along the ray through xi (unit),
// or nullopt when the ray misses the ball.
std::optional<std::pair<double, double>> ray_ball_interval(const Vec& xi, const Vec& x,
                                                           double r);

// Mass of s^{-1-alpha} ds over (a, b), 0 <= a <= b <= inf.
double radial_mass(double a, double b, double alpha);

// Probe-fit of the gamma exponent: minimum log-log slope of r -> nu_ball(x, r)
// over equispaced probe directions x on the circle, r in {2^-3, ..., 2^-10}.
struct GammaProbeFit {
    double min_slope = 0.0;
    double max_slope = 0.0;
    int probes_used = 0;
};
GammaProbeFit gamma_probe_fit(const ModelParams& m, int n_probe = 32);

// gamma plus all derived regularity indices.  Atomic measures give gamma = 1
// and bounded-density measures gamma = d exactly; the probe fit is run for
// density tables as a consistency check and sets fit_warning on disagreement.
SmoothnessIndices gamma_estimate(const ModelParams& m, bool run_probe_fit = true);

} // namespace astab

#endif
