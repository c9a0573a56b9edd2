#ifndef ANISOSTABLE_SPECTRAL_MEASURE_HPP
#define ANISOSTABLE_SPECTRAL_MEASURE_HPP

#include <optional>
#include <vector>

#include "anisostable/vec.hpp"

namespace astab {

enum class MeasureKind { atomic, angular_density };

struct Atom {
    Vec dir;       // unit vector
    double weight; // > 0
};

// Finite symmetric nondegenerate measure mu on the unit sphere.  Stored
// either as atoms (already symmetrized: every atom has its antipode with the
// same weight) or, for d = 2, as a piecewise-constant density table over a
// uniform grid of cells on [0, 2*pi).
struct SpectralMeasure {
    MeasureKind kind = MeasureKind::atomic;
    std::vector<Atom> atoms;
    std::vector<double> density; // value on cell i = [2*pi*i/n, 2*pi*(i+1)/n)
    double total_mass = 0.0;
};

// Symmetrizes, normalizes directions, merges duplicate atoms, and verifies
// nondegeneracy (support must span R^d).  Throws DegenerateMeasure,
// NonUnitDirection, NegativeWeight, InvalidParams.
SpectralMeasure validate_spectral(const SpectralMeasure& raw, int d);

// One representative per {xi, -xi} pair with the pair's combined weight.
std::vector<Atom> atom_pairs(const SpectralMeasure& mu);

struct ModelParams {
    int d = 2;
    double alpha = 1.0;
    SpectralMeasure mu;
};

// Validates d, alpha and the measure.
ModelParams make_model(int d, double alpha, const SpectralMeasure& raw_mu);

// Convenience constructors used all over the tests and tools.
ModelParams make_atomic_model(int d, double alpha, const std::vector<Atom>& atoms);
ModelParams make_density_model(double alpha, const std::vector<double>& density_values);
// Uniform density with the given total mass (d = 2).
ModelParams make_isotropic_model(double alpha, double total_mass = 1.0, int cells = 64);

enum class PotentialClass { holder_kappa0, holder_kappa0_minus, none };
enum class ModulusModel { power, power_log, power_log2 };

struct SmoothnessIndices {
    double gamma = 0.0;  // in [1, d]
    double kappa0 = 0.0; // gamma - (d - 2*alpha)
    double kappa1 = 0.0; // gamma - (d - alpha) = kappa0 - alpha
    PotentialClass potential_class = PotentialClass::none;
    std::optional<double> rho;            // harmonic-modulus exponent, when defined
    ModulusModel modulus_model = ModulusModel::power;
    bool fit_warning = false;             // probe-fit disagreement flag
    std::optional<double> fitted_gamma;   // probe-fit value when one was run
};

const char* to_string(PotentialClass c);
const char* to_string(ModulusModel m);

} // namespace astab

#endif
