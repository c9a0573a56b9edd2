#ifndef ANISOSTABLE_STABLE_SAMPLER_HPP
#define ANISOSTABLE_STABLE_SAMPLER_HPP

#include "anisostable/rng.hpp"

namespace astab {

// One draw of a symmetric alpha-stable variable with characteristic function
// exp(-scale^alpha |v|^alpha), by the Chambers-Mallows-Stuck transform.
double sample_stable_1d(double alpha, double scale, CounterRng& rng);

} // namespace astab

#endif
