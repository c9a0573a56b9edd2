#include "anisostable/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "anisostable/errors.hpp"
#include "anisostable/stable_sampler.hpp"
#include "anisostable/stats.hpp"
#include "anisostable/symbol.hpp"

namespace astab {

double small_jump_second_moment(const ModelParams& m, double eps, double t) {
    return t * m.mu.total_mass * std::pow(eps, 2.0 - m.alpha) / (2.0 - m.alpha);
}

Domain Domain::ball(const Vec& c, double radius) {
    Domain d;
    d.kind = Kind::ball;
    d.center = c;
    d.r = radius;
    return d;
}

Domain Domain::annulus(double inner, double outer) {
    Domain d;
    d.kind = Kind::annulus;
    d.center = {0, 0, 0};
    d.r = inner;
    d.R = outer;
    return d;
}

double Domain::gap(const Vec& x) const {
    if (kind == Kind::ball) return r - dist(x, center);
    const double a = norm(x);
    return std::min(a - r, R - a);
}

JumpSampler::JumpSampler(const ModelParams& m, double eps)
    : alpha_(m.alpha), eps_(eps), atomic_(m.mu.kind == MeasureKind::atomic) {
    if (!(eps > 0.0)) throw InvalidParams("JumpSampler: eps must be positive");
    rate_ = m.mu.total_mass * std::pow(eps, -m.alpha) / m.alpha;
    if (atomic_) {
        double acc = 0.0;
        for (const Atom& a : m.mu.atoms) {
            acc += a.weight;
            dirs_.push_back(a.dir);
            cum_weights_.push_back(acc);
        }
        for (double& c : cum_weights_) c /= acc;
    } else {
        const std::size_t n = m.mu.density.size();
        cell_width_ = 2.0 * M_PI / n;
        cell_cdf_.resize(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += m.mu.density[i] * cell_width_;
            cell_cdf_[i] = acc;
        }
        for (double& c : cell_cdf_) c /= acc;
    }
}

Vec JumpSampler::draw(CounterRng& rng) const {
    // radius from the Pareto law P(R > r) = (r/eps)^{-alpha}
    const double radius = eps_ * std::pow(rng.next_open(), -1.0 / alpha_);
    const double u = rng.next_double();
    if (atomic_) {
        const auto it = std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u);
        const std::size_t idx =
            std::min(static_cast<std::size_t>(it - cum_weights_.begin()), dirs_.size() - 1);
        return scale(dirs_[idx], radius);
    }
    const auto it = std::lower_bound(cell_cdf_.begin(), cell_cdf_.end(), u);
    const std::size_t idx =
        std::min(static_cast<std::size_t>(it - cell_cdf_.begin()), cell_cdf_.size() - 1);
    const double prev = idx == 0 ? 0.0 : cell_cdf_[idx - 1];
    const double frac = (u - prev) / std::max(cell_cdf_[idx] - prev, 1e-300);
    const double theta = (idx + frac) * cell_width_;
    return scale(unit_from_angle(theta), radius);
}

namespace {

Vec increment_atomic(const ModelParams& m, double t, CounterRng& rng) {
    const double cnorm = stable_norm_constant(m.alpha);
    Vec x{0, 0, 0};
    for (const Atom& pair : atom_pairs(m.mu)) {
        // pair.weight is the combined mass of {xi, -xi}
        const double s = std::pow(t * cnorm * pair.weight, 1.0 / m.alpha);
        const double y = sample_stable_1d(m.alpha, s, rng);
        x = add(x, scale(pair.dir, y));
    }
    return x;
}

long poisson_count(double mean, CounterRng& rng) {
    if (mean > 1e6) throw InvalidParams("poisson_count: rate too large");
    // exponential-gap counting; exact and cheap at the rates used here
    long k = 0;
    double acc = rng.next_exponential();
    while (acc < mean) {
        ++k;
        acc += rng.next_exponential();
    }
    return k;
}

} // namespace

Vec sample_increment(const ModelParams& m, const SimScheme& s, double t, CounterRng& rng) {
    if (!(t > 0.0)) throw InvalidParams("sample_increment: t must be positive");
    if (t > s.dt_max + 1e-12) throw InvalidParams("sample_increment: t exceeds dt_max");
    if (s.mode == SimMode::atomic_exact) {
        if (m.mu.kind != MeasureKind::atomic)
            throw InvalidParams("atomic-exact sampling needs an atomic measure");
        return increment_atomic(m, t, rng);
    }
    if (small_jump_second_moment(m, s.eps, t) > s.bias_budget)
        throw BiasBudgetExceeded("sample_increment: small-jump second moment above budget");
    const JumpSampler js(m, s.eps);
    const long k = poisson_count(t * js.rate(), rng);
    Vec x{0, 0, 0};
    for (long i = 0; i < k; ++i) x = add(x, js.draw(rng));
    return x;
}

namespace {

constexpr long kStepLimit = 10000000;

ExitSample exit_atomic(const ModelParams& m, const SimScheme& s, const Domain& domain,
                       const Vec& x0, CounterRng& rng) {
    ExitSample out;
    Vec x = x0;
    double t = 0.0;
    long steps = 0;
    while (true) {
        const double gap = domain.gap(x);
        if (gap <= 0.0) break;
        const double dt =
            s.fixed_step ? s.dt_max
                         : std::min(s.dt_max, s.dt_cal * std::pow(gap / 4.0, m.alpha));
        x = add(x, increment_atomic(m, dt, rng));
        t += dt;
        if (++steps > kStepLimit) throw StepLimitExceeded("sample_exit: step limit reached");
    }
    out.tau = t;
    out.x_exit = x;
    out.n_steps = steps;
    out.overshoot = -domain.gap(x);
    return out;
}

ExitSample exit_jump_split(const ModelParams& m, const SimScheme& s, const Domain& domain,
                           const Vec& x0, CounterRng& rng, const JumpSampler& js) {
    // between truncated jumps the path is constant, so exits happen at jump
    // times and the walk is event-driven
    ExitSample out;
    Vec x = x0;
    double t = 0.0;
    long steps = 0;
    while (domain.contains(x)) {
        t += rng.next_exponential() / js.rate();
        x = add(x, js.draw(rng));
        if (++steps > kStepLimit) throw StepLimitExceeded("sample_exit: step limit reached");
    }
    out.tau = t;
    out.x_exit = x;
    out.n_steps = steps;
    out.overshoot = -domain.gap(x);
    out.truncation_bias_flag = small_jump_second_moment(m, s.eps, t) > s.bias_budget;
    return out;
}

} // namespace

ExitSample sample_exit(const ModelParams& m, const SimScheme& s, const Domain& domain,
                       const Vec& x0, CounterRng& rng, const JumpSampler* js) {
    if (!domain.contains(x0)) throw DomainError("sample_exit: start point not inside");
    if (s.mode == SimMode::atomic_exact) {
        if (m.mu.kind != MeasureKind::atomic)
            throw InvalidParams("atomic-exact sampling needs an atomic measure");
        return exit_atomic(m, s, domain, x0, rng);
    }
    if (js) return exit_jump_split(m, s, domain, x0, rng, *js);
    const JumpSampler local(m, s.eps);
    return exit_jump_split(m, s, domain, x0, rng, local);
}

std::pair<double, double> expected_exit_time(const ModelParams& m, const SimScheme& s,
                                             const Domain& domain, const Vec& x0, long n,
                                             ExecMode mode) {
    if (n < 1000) throw InvalidParams("expected_exit_time: need n >= 1000");
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    std::vector<double> taus(n);
    for_each_index(n, mode, [&](std::int64_t i) {
        CounterRng rng(s.seed, static_cast<std::uint64_t>(i));
        taus[i] = sample_exit(m, s, domain, x0, rng, &js).tau;
    });
    const MeanStderr ms = mean_stderr(taus);
    return {ms.mean, ms.stderr_};
}

} // namespace astab
