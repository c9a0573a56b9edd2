#ifndef ANISOSTABLE_SYMBOL_HPP
#define ANISOSTABLE_SYMBOL_HPP

#include <memory>
#include <vector>

#include "anisostable/spectral_measure.hpp"
#include "anisostable/vec.hpp"

namespace astab {

// pi / (2 sin(pi alpha / 2) Gamma(1 + alpha)); makes the symbol of a unit
// atom pair the exact 1-D stable exponent |<u, xi>|^alpha
double stable_norm_constant(double alpha);

// characteristic exponent Phi(u); exact sum for atomic mu, kink-split
// composite Gauss quadrature (>= 4096 nodes) for density mu
double char_exponent(const ModelParams& m, const Vec& u);

// min and max of Phi over n_probe equispaced directions on the sphere;
// throws NondegeneracyViolated when min <= 1e-12 * max
std::pair<double, double> phi_sphere_bounds(const ModelParams& m, int n_probe);

// Cached angular profile phi(theta) = Phi(unit(theta)) for d = 2 hot loops.
// (definition below; angular_symbol() returns a per-model cached instance)
class AngularSymbol;
const AngularSymbol& angular_symbol(const ModelParams& m);


// Atomic measures evaluate the exact sum; density measures use a dense
// precomputed table with periodic cubic interpolation.
class AngularSymbol {
  public:
    explicit AngularSymbol(const ModelParams& m, int table_size = 16384);

    double operator()(double theta) const;
    double min_value() const { return min_; }
    double max_value() const { return max_; }
    // angles in [0, pi) where the atomic profile has |cos|^alpha kinks
    const std::vector<double>& kink_angles() const { return kinks_; }

  private:
    double alpha_;
    double norm_const_;
    bool atomic_;
    std::vector<double> pair_angles_; // one per atom pair
    std::vector<double> pair_weights_;
    std::vector<double> table_; // density path
    double min_ = 0.0, max_ = 0.0;
    std::vector<double> kinks_;
};

} // namespace astab

#endif
