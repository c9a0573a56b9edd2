#ifndef ANISOSTABLE_DENSITY_HPP
#define ANISOSTABLE_DENSITY_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "anisostable/parallel.hpp"
#include "anisostable/spectral_measure.hpp"
#include "anisostable/stats.hpp"
#include "anisostable/vec.hpp"

namespace astab {

// Regular spatial grid covering [-L/2, L/2)^d, N points per axis, at time t.
// The mesh must satisfy L/N <= 0.25 and N must be a power of two >= 64;
// pointwise agreement with the free-space density is declared for |x| <= L/4.
struct GridSpec {
    double extent = 64.0;
    int points_per_axis = 1024;
    double t = 1.0;
};

struct MultiIndex {
    std::array<int, 3> k{0, 0, 0};
    int order() const { return k[0] + k[1] + k[2]; }
};

// Sampled values of D^beta p_t on the grid.  The field is the inverse DFT of
// (iu)^beta exp(-t Phi(u)) on the dual grid, i.e. the L-periodization of the
// free-space function; its mesh sum times the cell volume is exactly one for
// beta = 0.
struct DensityField {
    GridSpec grid;
    MultiIndex beta;
    int d = 2;
    std::vector<double> values;

    double mesh() const { return grid.extent / grid.points_per_axis; }
    double cell_volume() const;
    double coord(int idx) const { return (idx - grid.points_per_axis / 2) * mesh(); }
    // row-major: d=2 index (ix, iy); d=3 index (ix, iy, iz)
    double at(int ix, int iy, int iz = 0) const;
    std::size_t flat(int ix, int iy, int iz = 0) const;
};

DensityField density_grid(const ModelParams& m, const GridSpec& g, const MultiIndex& beta,
                          ExecMode mode = ExecMode::parallel);

// p_t(x) by the quadrature path (profile transform + adaptive angular rule);
// accurate far beyond the grid's reach.
double density_point(const ModelParams& m, double t, const Vec& x);

// D^beta p_t(x), |beta| <= 3, same path.
double density_derivative_point(const ModelParams& m, double t, const Vec& x,
                                const MultiIndex& beta);

// same, with an explicit relative accuracy target (cheaper when loose)
double density_derivative_point_tol(const ModelParams& m, double t, const Vec& x,
                                    const MultiIndex& beta, double rel_tol);

// least-squares slope of log p_1(r dir) against log r over a log-spaced
// radius sweep; throws FitUnstable when R^2 < 0.99
LineFit decay_fit(const ModelParams& m, const Vec& direction, double r_lo, double r_hi,
                  int n_pts);

} // namespace astab

#endif
