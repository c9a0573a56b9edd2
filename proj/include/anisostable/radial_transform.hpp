#ifndef ANISOSTABLE_RADIAL_TRANSFORM_HPP
#define ANISOSTABLE_RADIAL_TRANSFORM_HPP

#include <vector>

namespace astab {

// Oscillatory radial integrals
//
//   F_cos(tau) = int_0^inf sigma^m exp(-sigma^alpha) cos(sigma tau) dsigma
//   F_sin(tau) = int_0^inf sigma^m exp(-sigma^alpha) sin(sigma tau) dsigma
//
// tabulated once per (alpha, m) on an asinh-spaced grid and extended by the
// endpoint asymptotic series for large tau.  Every pointwise density,
// derivative and potential evaluation reduces to interpolating these two
// profiles, because the full symbol scales out:
//   int sigma^m exp(-phi sigma^alpha) trig(sigma t) dsigma
//     = phi^{-(m+1)/alpha} F_trig(t phi^{-1/alpha}).
// Panels integrate the oscillation exactly against a quadratic fit of the
// smooth factor, so accuracy is uniform in tau.
class RadialTransform {
  public:
    RadialTransform(double alpha, int m);

    double eval_cos(double tau) const; // even in tau
    double eval_sin(double tau) const; // odd in tau

    double alpha() const { return alpha_; }
    int power() const { return m_; }

    // tabulated range; beyond it the asymptotic series takes over
    double table_limit() const { return tau_max_; }
    double asymptotic_cos(double tau) const;
    double asymptotic_sin(double tau) const;

  private:
    double interp(const std::vector<double>& table, double tau, double parity) const;

    double alpha_;
    int m_;
    double tau_max_;
    double u_step_;
    std::vector<double> cos_table_;
    std::vector<double> sin_table_;
};

// process-wide cache
const RadialTransform& radial_transform(double alpha, int m);

} // namespace astab

#endif
