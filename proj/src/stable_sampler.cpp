#include "anisostable/stable_sampler.hpp"

#include <cmath>

#include "anisostable/errors.hpp"

namespace astab {

double sample_stable_1d(double alpha, double scale, CounterRng& rng) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidParams("sample_stable_1d: bad alpha");
    if (!(scale > 0.0)) throw InvalidParams("sample_stable_1d: bad scale");
    const double theta = rng.next_half_angle();
    if (std::fabs(alpha - 1.0) < 1e-14) return scale * std::tan(theta);
    double w = rng.next_exponential();
    while (w == 0.0) w = rng.next_exponential();
    const double z = std::sin(alpha * theta) / std::pow(std::cos(theta), 1.0 / alpha) *
                     std::pow(std::cos((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
    return scale * z;
}

} // namespace astab
