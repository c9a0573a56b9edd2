#ifndef ANISOSTABLE_POTENTIAL_HPP
#define ANISOSTABLE_POTENTIAL_HPP

#include <functional>
#include <memory>
#include <vector>

#include "anisostable/density.hpp"
#include "anisostable/spectral_measure.hpp"
#include "anisostable/stats.hpp"
#include "anisostable/vec.hpp"

namespace astab {

// V(theta) = alpha * int_0^inf s^{d-alpha-1} p_1(s theta) ds for |theta| = 1.
// Returns +infinity when the far integral fails to contract (directions
// where the potential kernel is genuinely infinite).
double potential_direction(const ModelParams& m, const Vec& theta);

// V(x) = |x|^{alpha-d} V(x/|x|); throws OriginSingularity at x = 0.
double potential(const ModelParams& m, const Vec& x);

struct PotentialDerivative {
    double value = 0.0;
    bool out_of_theorem = false; // |beta| >= kappa0: no guarantee backs the number
};

// D^beta V(x) via the same radial reduction applied to D^beta p_1.
PotentialDerivative potential_derivative(const ModelParams& m, const Vec& x,
                                         const MultiIndex& beta);

struct WeightedPoint {
    Vec point;
    double weight;
};

// potential of a finite atomic measure: sum_i w_i V(x - z_i); throws
// SupportHit when x is within 1e-9 of the support
double potential_of_measure(const ModelParams& m, const std::vector<WeightedPoint>& mass,
                            const Vec& x);

// Direction-table-backed evaluator for Monte Carlo inner loops: V on a knot
// grid over [0, pi) (split at the direction-profile kinks), cubic in between,
// exact homogeneous scaling in |x|.  Build once per model, then thread-safe.
class PotentialEvaluator {
  public:
    PotentialEvaluator(const ModelParams& m, int directions = 1024);

    double operator()(const Vec& x) const;        // V(x)
    double direction_value(double theta) const;   // V(unit(theta))
    const ModelParams& model() const { return m_; }

  private:
    ModelParams m_;
    double homogeneity_; // alpha - d
    std::vector<double> knots_;  // segment boundaries in [0, pi]
    std::vector<std::vector<double>> seg_values_;
    std::vector<int> seg_counts_;
};

// cached per-model instance
std::shared_ptr<const PotentialEvaluator> potential_evaluator(const ModelParams& m,
                                                              int directions = 1024);

struct HolderWindow {
    double h_lo = 1e-4;
    double h_hi = 1e-1;
    int n = 12;
};

struct HolderFit {
    double exponent = 0.0;
    HolderWindow window;
    double r_squared = 0.0;
    ModulusModel modulus_model = ModulusModel::power;
};

// log-log fit of |f(x0 + h dir) - f(x0)| over a log-spaced window of
// increments; optionally uses the symmetric second difference, which is what
// separates a crease from a smooth slope.  Model selection compares the
// pure-power fit against a power*log(2 + 1/h) modulus.
HolderFit holder_exponent_fit(const std::function<double(const Vec&)>& f, const Vec& x0,
                              const Vec& direction, const HolderWindow& window,
                              bool second_difference = false);

} // namespace astab

#endif
