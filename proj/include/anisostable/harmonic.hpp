#ifndef ANISOSTABLE_HARMONIC_HPP
#define ANISOSTABLE_HARMONIC_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "anisostable/potential.hpp"
#include "anisostable/simulate.hpp"
#include "anisostable/stats.hpp"

namespace astab {

struct ExitPoint {
    Vec x;
    double tau;
};

// empirical harmonic measure: exit samples from a domain
struct EmpiricalExit {
    std::vector<ExitPoint> samples;
    Vec x0{0, 0, 0};
    Domain domain;
    std::uint64_t seed = 0;
};

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    long n = 0;
    std::uint64_t seed = 0;
    bool high_variance_flag = false;
};

// n independent exits of the unit ball started at x0 (|x0| < 1)
EmpiricalExit harmonic_measure(const ModelParams& m, const SimScheme& s, const Vec& x0,
                               long n, ExecMode mode = ExecMode::parallel);

// G_B(x, v) = V(v - x) - E^x V(X_tau - v); exact 0 when v lies outside the
// closed ball.  Requires kappa0 > 0.
McEstimate green_function(const ModelParams& m, const SimScheme& s, const Vec& x,
                          const Vec& v, long n, ExecMode mode = ExecMode::parallel);

// same estimator over a fixed empirical exit sample (control variates)
McEstimate green_from_exits(const PotentialEvaluator& pot, const EmpiricalExit& exits,
                            const Vec& x, const Vec& v);

// E^x g(X_tau_B): the mean-value definition of harmonicity
McEstimate harmonic_eval(const ModelParams& m, const SimScheme& s,
                         const std::function<double(const Vec&)>& g, const Vec& x, long n,
                         ExecMode mode = ExecMode::parallel);

// two-stage version: exit B(x, r) first, then continue to the exit of B
McEstimate harmonic_eval_two_stage(const ModelParams& m, const SimScheme& s,
                                   const std::function<double(const Vec&)>& g, const Vec& x,
                                   double r, long n, ExecMode mode = ExecMode::parallel);

// U_r phi(x) = (E^x phi(X_{tau_{B(x,r)}}) - phi(x)) / E^x tau; stderr by the
// delta method
McEstimate dynkin_apply(const ModelParams& m, const SimScheme& s,
                        const std::function<double(const Vec&)>& phi, const Vec& x, double r,
                        long n, ExecMode mode = ExecMode::parallel);

// U_r u for the harmonic function u = E^. g(X_tau_B), sampled by path
// continuation so no nested estimate of u is needed
McEstimate dynkin_harmonic(const ModelParams& m, const SimScheme& s,
                           const std::function<double(const Vec&)>& g, const Vec& x, double r,
                           long n, ExecMode mode = ExecMode::parallel);

// Ikeda-Watanabe quadrature of the Poisson kernel of the unit ball against a
// shared empirical exit sample.  Per-ray radial integrals with panels graded
// at the Green singularity and the chord endpoints.
class PoissonEstimator {
  public:
    PoissonEstimator(const ModelParams& m, const SimScheme& s, const Vec& x, long n_mc,
                     ExecMode mode = ExecMode::parallel, int table_directions = 1024);

    // P_B(x, z) for |z| > 1
    McEstimate eval(const Vec& z, int n_rays = 128) const;

    // coarse radial-angular quadrature of eval over B(0, R_max) \ B
    double normalization(int n_radial, int n_angular, double R_max, int n_rays = 64) const;

    const EmpiricalExit& exits() const { return exits_; }

  private:
    ModelParams m_;
    Vec x_;
    std::shared_ptr<const PotentialEvaluator> pot_;
    EmpiricalExit exits_;
    double gamma_ = 1.0;
};

struct HarmonicHolderOptions {
    HolderWindow window{0.02, 0.16, 6};
    long n = 100000;
    std::uint64_t seed = 1;
};

// common-random-number increments of u(x0 + h dir) - u(x0) for the harmonic
// extension of g; log-log fit of the increment magnitude
HolderFit harmonic_holder_fit(const ModelParams& m, const SimScheme& s,
                              const std::function<double(const Vec&)>& g, const Vec& x0,
                              const Vec& direction, const HarmonicHolderOptions& opt,
                              ExecMode mode = ExecMode::parallel);

enum class DecayKind { green, poisson, exit_time };

struct DecayReport {
    std::vector<double> abscissa; // the quantity whose log is the regressor
    std::vector<double> values;
    LineFit fit;
};

struct DecayProfileSpec {
    Vec direction{1, 0, 0};
    double lo = 0.0;  // profile parameter range (meaning depends on kind)
    double hi = 0.0;
    int n_pts = 6;
    long n_mc = 20000;
};

// log-log slope fits of Green / Poisson / exit-time profiles:
//   exit_time: s(x) against 1 - |x|^2, |x| in [lo, hi]
//   green:     G(0, v) against 1 - |v|, |v| in [lo, hi]
//   poisson:   P(0, z) against |z| in [lo, hi] (far field), or against
//              |z| - 1 when hi <= 1.5 (boundary blow-up)
DecayReport boundary_decay_check(const ModelParams& m, const SimScheme& s, DecayKind kind,
                                 const DecayProfileSpec& spec,
                                 ExecMode mode = ExecMode::parallel);

// boundary data parsers for the CLI and the experiment driver:
//   "halfplane:k"   indicator of {z_k > 0}, k = 1-based axis
//   "ball:cx,cy:r"  indicator of a ball
//   "cos:k"         cos(z_k)
std::function<double(const Vec&)> make_boundary_data(const std::string& spec);

} // namespace astab

#endif
