#ifndef ANISOSTABLE_SIMULATE_HPP
#define ANISOSTABLE_SIMULATE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "anisostable/parallel.hpp"
#include "anisostable/rng.hpp"
#include "anisostable/spectral_measure.hpp"
#include "anisostable/vec.hpp"

namespace astab {

enum class SimMode {
    atomic_exact, // sum of 1-D stable marginals along atom pairs, exact in law
    jump_split    // compound Poisson of jumps above eps, small jumps dropped
};

struct SimScheme {
    SimMode mode = SimMode::atomic_exact;
    double eps = 1e-3;       // jump-split truncation radius
    double dt_max = 0.05;    // cap for atomic-exact stepping
    double dt_cal = 0.1;     // step-size calibration: dt = dt_cal (gap/4)^alpha
    std::uint64_t seed = 1;
    double bias_budget = 1e-3; // cap on t |mu| eps^{2-alpha} / (2-alpha)
    bool fixed_step = false;   // disable adaptivity (common-random-number fits)
};

// second moment of the dropped small jumps over time t
double small_jump_second_moment(const ModelParams& m, double eps, double t);

struct Domain {
    enum class Kind { ball, annulus };
    Kind kind = Kind::ball;
    Vec center{0, 0, 0}; // ball only; annuli are centered at the origin
    double r = 1.0;      // ball radius / annulus inner radius
    double R = 2.0;      // annulus outer radius

    static Domain ball(const Vec& c, double radius);
    static Domain annulus(double inner, double outer);

    bool contains(const Vec& x) const { return gap(x) > 0.0; }
    // distance to the boundary from inside (negative overshoot outside)
    double gap(const Vec& x) const;
};

struct ExitSample {
    double tau = 0.0;
    Vec x_exit{0, 0, 0};
    long n_steps = 0;
    double overshoot = 0.0;
    bool truncation_bias_flag = false;
};

class JumpSampler;

// one increment of the process over time t
Vec sample_increment(const ModelParams& m, const SimScheme& s, double t, CounterRng& rng);

// first exit from the domain started at x0; a prebuilt JumpSampler skips the
// per-call setup in jump-split hot loops
ExitSample sample_exit(const ModelParams& m, const SimScheme& s, const Domain& domain,
                       const Vec& x0, CounterRng& rng, const JumpSampler* js = nullptr);

// Monte Carlo mean exit time over n replicas (replica-keyed streams)
std::pair<double, double> expected_exit_time(const ModelParams& m, const SimScheme& s,
                                             const Domain& domain, const Vec& x0, long n,
                                             ExecMode mode = ExecMode::parallel);

// direction and radius sampler for the truncated jump measure
class JumpSampler {
  public:
    JumpSampler(const ModelParams& m, double eps);
    double rate() const { return rate_; }
    Vec draw(CounterRng& rng) const;

  private:
    double alpha_;
    double eps_;
    double rate_;
    bool atomic_;
    std::vector<Vec> dirs_;
    std::vector<double> cum_weights_; // normalized cumulative
    std::vector<double> cell_cdf_;    // density path
    double cell_width_ = 0.0;
};

} // namespace astab

#endif
