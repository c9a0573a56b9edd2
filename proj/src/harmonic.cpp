#include "anisostable/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anisostable/errors.hpp"
#include "anisostable/levy_measure.hpp"
#include "anisostable/quadrature.hpp"

namespace astab {

namespace {

const Domain kUnitBall = Domain::ball({0, 0, 0}, 1.0);

void require_kappa0(const ModelParams& m) {
    if (gamma_estimate(m, false).kappa0 <= 0.0)
        throw HypothesisViolated("green_function: kappa0 <= 0, potential kernel unbounded");
}

void require_kappa1(const ModelParams& m) {
    if (gamma_estimate(m, false).kappa1 <= 0.0)
        throw HypothesisViolated("poisson_kernel: kappa1 <= 0");
}

} // namespace

EmpiricalExit harmonic_measure(const ModelParams& m, const SimScheme& s, const Vec& x0,
                               long n, ExecMode mode) {
    if (norm(x0) >= 1.0) throw DomainError("harmonic_measure: x0 must lie in the unit ball");
    EmpiricalExit out;
    out.samples.resize(n);
    out.x0 = x0;
    out.domain = kUnitBall;
    out.seed = s.seed;
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    for_each_index(n, mode, [&](std::int64_t i) {
        CounterRng rng(s.seed, static_cast<std::uint64_t>(i));
        const ExitSample e = sample_exit(m, s, kUnitBall, x0, rng, &js);
        out.samples[i] = {e.x_exit, e.tau};
    });
    return out;
}

McEstimate green_from_exits(const PotentialEvaluator& pot, const EmpiricalExit& exits,
                            const Vec& x, const Vec& v) {
    McEstimate out;
    out.n = static_cast<long>(exits.samples.size());
    out.seed = exits.seed;
    if (norm(v) >= 1.0) return out; // G vanishes off the ball, exact zero
    std::vector<double> terms(exits.samples.size());
    for (std::size_t i = 0; i < exits.samples.size(); ++i) {
        const Vec dz = sub(exits.samples[i].x, v);
        if (norm(dz) < 1e-9) throw SupportHit("green: exit sample met the pole");
        terms[i] = pot(dz);
    }
    const MeanStderr ms = mean_stderr(terms);
    out.estimate = pot(sub(v, x)) - ms.mean;
    out.stderr_ = ms.stderr_;
    out.high_variance_flag = dist(x, v) < 0.05;
    return out;
}

McEstimate green_function(const ModelParams& m, const SimScheme& s, const Vec& x,
                          const Vec& v, long n, ExecMode mode) {
    require_kappa0(m);
    if (norm(x) >= 1.0) throw DomainError("green_function: x must lie in the unit ball");
    if (dist(x, v) < 1e-12) throw DomainError("green_function: x = v");
    McEstimate out;
    out.n = n;
    out.seed = s.seed;
    if (norm(v) >= 1.0) return out; // exact zero off the ball
    const auto pot = potential_evaluator(m);
    EmpiricalExit exits = harmonic_measure(m, s, x, n, mode);
    // an exit sample colliding with the pole is resampled once
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    for (std::size_t i = 0; i < exits.samples.size(); ++i) {
        if (dist(exits.samples[i].x, v) < 1e-9) {
            CounterRng rng(s.seed, static_cast<std::uint64_t>(n + i));
            const ExitSample e = sample_exit(m, s, kUnitBall, x, rng, &js);
            exits.samples[i] = {e.x_exit, e.tau};
        }
    }
    return green_from_exits(*pot, exits, x, v);
}

McEstimate harmonic_eval(const ModelParams& m, const SimScheme& s,
                         const std::function<double(const Vec&)>& g, const Vec& x, long n,
                         ExecMode mode) {
    McEstimate out;
    out.n = n;
    out.seed = s.seed;
    if (norm(x) >= 1.0) { // already outside: tau = 0
        out.estimate = g(x);
        return out;
    }
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    std::vector<double> vals(n);
    for_each_index(n, mode, [&](std::int64_t i) {
        CounterRng rng(s.seed, static_cast<std::uint64_t>(i));
        vals[i] = g(sample_exit(m, s, kUnitBall, x, rng, &js).x_exit);
    });
    const MeanStderr ms = mean_stderr(vals);
    out.estimate = ms.mean;
    out.stderr_ = ms.stderr_;
    return out;
}

McEstimate harmonic_eval_two_stage(const ModelParams& m, const SimScheme& s,
                                   const std::function<double(const Vec&)>& g, const Vec& x,
                                   double r, long n, ExecMode mode) {
    if (norm(x) + r >= 1.0)
        throw DomainError("harmonic_eval_two_stage: inner ball must sit inside B");
    const Domain inner = Domain::ball(x, r);
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    std::vector<double> vals(n);
    for_each_index(n, mode, [&](std::int64_t i) {
        CounterRng rng(s.seed, static_cast<std::uint64_t>(i));
        const ExitSample first = sample_exit(m, s, inner, x, rng, &js);
        if (norm(first.x_exit) >= 1.0) {
            vals[i] = g(first.x_exit);
        } else {
            vals[i] = g(sample_exit(m, s, kUnitBall, first.x_exit, rng, &js).x_exit);
        }
    });
    McEstimate out;
    const MeanStderr ms = mean_stderr(vals);
    out.estimate = ms.mean;
    out.stderr_ = ms.stderr_;
    out.n = n;
    out.seed = s.seed;
    return out;
}

namespace {

McEstimate dynkin_ratio(const std::vector<double>& num_samples,
                        const std::vector<double>& tau_samples, double phi_x,
                        std::uint64_t seed) {
    const std::size_t n = num_samples.size();
    double ma = 0, mt = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += num_samples[i];
        mt += tau_samples[i];
    }
    ma /= n;
    mt /= n;
    double va = 0, vt = 0, cv = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = num_samples[i] - ma, dt = tau_samples[i] - mt;
        va += da * da;
        vt += dt * dt;
        cv += da * dt;
    }
    va /= n - 1;
    vt /= n - 1;
    cv /= n - 1;
    const double a = ma - phi_x;
    const double u = a / mt;
    // delta method for the ratio of means
    const double var_u = (va - 2.0 * u * cv + u * u * vt) / (mt * mt * n);
    McEstimate out;
    out.estimate = u;
    out.stderr_ = std::sqrt(std::max(var_u, 0.0));
    out.n = static_cast<long>(n);
    out.seed = seed;
    return out;
}

} // namespace

McEstimate dynkin_apply(const ModelParams& m, const SimScheme& s,
                        const std::function<double(const Vec&)>& phi, const Vec& x, double r,
                        long n, ExecMode mode) {
    if (!(r > 0.0)) throw InvalidParams("dynkin_apply: r must be positive");
    const Domain ball = Domain::ball(x, r);
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    std::vector<double> phis(n), taus(n);
    for_each_index(n, mode, [&](std::int64_t i) {
        CounterRng rng(s.seed, static_cast<std::uint64_t>(i));
        const ExitSample e = sample_exit(m, s, ball, x, rng, &js);
        phis[i] = phi(e.x_exit);
        taus[i] = e.tau;
    });
    return dynkin_ratio(phis, taus, phi(x), s.seed);
}

McEstimate dynkin_harmonic(const ModelParams& m, const SimScheme& s,
                           const std::function<double(const Vec&)>& g, const Vec& x, double r,
                           long n, ExecMode mode) {
    if (norm(x) + r >= 1.0)
        throw DomainError("dynkin_harmonic: B(x, r) must sit inside the unit ball");
    // numerator: two-stage sample of u(X_tau_r) minus a one-stage sample of
    // u(x), both through the boundary data
    const Domain inner = Domain::ball(x, r);
    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    std::vector<double> two(n), taus(n), one(n);
    for_each_index(n, mode, [&](std::int64_t i) {
        CounterRng rng(s.seed, static_cast<std::uint64_t>(i));
        const ExitSample first = sample_exit(m, s, inner, x, rng, &js);
        taus[i] = first.tau;
        two[i] = (norm(first.x_exit) >= 1.0)
                     ? g(first.x_exit)
                     : g(sample_exit(m, s, kUnitBall, first.x_exit, rng, &js).x_exit);
        CounterRng rng2(s.seed ^ 0x5DEECE66DULL, static_cast<std::uint64_t>(i));
        one[i] = g(sample_exit(m, s, kUnitBall, x, rng2, &js).x_exit);
    });
    double mu_tau = 0;
    for (double t : taus) mu_tau += t;
    mu_tau /= n;
    std::vector<double> diff(n);
    for (long i = 0; i < n; ++i) diff[i] = two[i] - one[i];
    const MeanStderr ms = mean_stderr(diff);
    McEstimate out;
    out.estimate = ms.mean / mu_tau;
    out.stderr_ = ms.stderr_ / mu_tau;
    out.n = n;
    out.seed = s.seed;
    return out;
}

PoissonEstimator::PoissonEstimator(const ModelParams& m, const SimScheme& s, const Vec& x,
                                   long n_mc, ExecMode mode, int table_directions)
    : m_(m), x_(x) {
    require_kappa1(m);
    require_kappa0(m);
    if (norm(x) >= 1.0) throw DomainError("PoissonEstimator: x must lie in the unit ball");
    pot_ = potential_evaluator(m, table_directions);
    exits_ = harmonic_measure(m, s, x, n_mc, mode);
    gamma_ = gamma_estimate(m, false).gamma;
}

namespace {

struct RayNode {
    double s;
    double weight; // includes ray weight, Gauss weight and s^{-1-alpha}
};

// Gauss panels over the chord (s_lo, s_hi), graded at both endpoints (the
// Green factor vanishes like a square root there) and around the point of
// closest approach to the pole x (where the Green factor blows up).
void chord_nodes(double s_lo, double s_hi, double s_star, bool refine_star, double alpha,
                 double ray_weight, std::vector<RayNode>& out) {
    const double w = s_hi - s_lo;
    std::vector<double> edges{s_lo, s_lo + w / 8.0, s_hi - w / 8.0, s_hi};
    // the s^{-1-alpha} weight spans orders of magnitude when the chord
    // starts right at the boundary; resolve it geometrically
    if (s_lo < s_hi / 50.0) {
        for (double e = 2.0 * s_lo; e < s_lo + w / 8.0; e *= 2.0) edges.push_back(e);
    }
    if (refine_star) {
        for (int j = 1; j <= 6; ++j) {
            const double d = w * std::pow(4.0, -j) / 8.0;
            for (double e : {s_star - d, s_star + d})
                if (e > s_lo + 1e-14 && e < s_hi - 1e-14) edges.push_back(e);
        }
        if (s_star > s_lo + 1e-14 && s_star < s_hi - 1e-14) edges.push_back(s_star);
    }
    std::sort(edges.begin(), edges.end());
    const GaussRule& gl = gauss_legendre(8);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        if (b - a < 1e-15) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 8; ++q) {
            const double s = mid + half * gl.nodes[q];
            out.push_back({s, ray_weight * gl.weights[q] * half * std::pow(s, -1.0 - alpha)});
        }
    }
}

} // namespace

McEstimate PoissonEstimator::eval(const Vec& z, int n_rays) const {
    if (norm(z) <= 1.0) throw DomainError("poisson_kernel: z must lie outside the ball");

    // quadrature rays of the spectral measure; only directions in the
    // tangency cone around z meet the ball B(z, 1), so the angular nodes are
    // concentrated there
    std::vector<std::pair<Vec, double>> rays; // direction, weight
    if (m_.mu.kind == MeasureKind::atomic) {
        for (const Atom& a : m_.mu.atoms) rays.emplace_back(a.dir, a.weight);
    } else {
        const double az = norm(z);
        const double cone = std::asin(std::min(1.0, 1.0 / az));
        const double phi_z = plane_angle(z);
        const std::size_t cells = m_.mu.density.size();
        const double h = 2.0 * M_PI / cells;
        for (std::size_t i = 0; i < cells; ++i) {
            if (m_.mu.density[i] == 0.0) continue;
            const double c0 = i * h, c1 = (i + 1) * h;
            for (double shift : {-2.0 * M_PI, 0.0, 2.0 * M_PI}) {
                const double lo = std::max(c0 + shift, phi_z - cone);
                const double hi = std::min(c1 + shift, phi_z + cone);
                if (hi - lo < 1e-14) continue;
                const int pts = std::max(
                    4, static_cast<int>(std::lround(n_rays * (hi - lo) / (2.0 * cone))));
                const GaussRule& gl = gauss_legendre(pts);
                const double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
                for (int q = 0; q < pts; ++q)
                    rays.emplace_back(unit_from_angle(mid + hw * gl.nodes[q]),
                                      m_.mu.density[i] * gl.weights[q] * hw);
            }
        }
    }

    std::vector<RayNode> nodes;
    std::vector<Vec> points; // w = z - s omega, inside B
    std::vector<double> a_part;
    for (const auto& [omega, wgt] : rays) {
        const auto iv = ray_ball_interval(omega, z, 1.0); // |s omega - z| < 1
        if (!iv) continue;
        // closest approach of w(s) = z - s omega to the pole x
        const double s_star = dot(omega, sub(z, x_));
        const double min_dist = dist(sub(z, scale(omega, s_star)), x_);
        const bool refine = s_star > iv->first && s_star < iv->second &&
                            min_dist < 0.25 * (iv->second - iv->first);
        const std::size_t before = nodes.size();
        chord_nodes(iv->first, iv->second, s_star, refine, m_.alpha, wgt, nodes);
        for (std::size_t q = before; q < nodes.size(); ++q)
            points.push_back(sub(z, scale(omega, nodes[q].s)));
    }

    McEstimate out;
    out.n = static_cast<long>(exits_.samples.size());
    out.seed = exits_.seed;
    if (nodes.empty()) return out;

    // direct part: sum_q W_q V(w_q - x)
    double direct = 0.0;
    a_part.resize(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        a_part[q] = nodes[q].weight * (*pot_)(sub(points[q], x_));
        direct += a_part[q];
    }
    // harmonic correction, grouped per exit sample for an honest stderr
    const std::size_t n = exits_.samples.size();
    std::vector<double> totals(n, 0.0);
    for_each_index(static_cast<std::int64_t>(n), ExecMode::parallel, [&](std::int64_t i) {
        const Vec zi = exits_.samples[i].x;
        double acc = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q)
            acc += nodes[q].weight * (*pot_)(sub(zi, points[q]));
        totals[i] = acc;
    });
    const MeanStderr ms = mean_stderr(totals);
    out.estimate = direct - ms.mean;
    out.stderr_ = ms.stderr_;
    return out;
}

double PoissonEstimator::normalization(int n_radial, int n_angular, double R_max,
                                       int n_rays) const {
    // |z| = 1 + u^2 removes the boundary blow-up of the integrand
    const GaussRule& gl = gauss_legendre(n_radial);
    const double u_max = std::sqrt(R_max - 1.0);
    double total = 0.0;
    for (int i = 0; i < n_radial; ++i) {
        const double u = 0.5 * u_max * (1.0 + gl.nodes[i]);
        const double wu = 0.5 * u_max * gl.weights[i];
        const double r = 1.0 + u * u;
        double ring = 0.0;
        for (int j = 0; j < n_angular; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / n_angular;
            ring += eval(scale(unit_from_angle(th), r), n_rays).estimate;
        }
        ring *= 2.0 * M_PI / n_angular;
        total += wu * ring * r * 2.0 * u; // dz = r dr dtheta, dr = 2 u du
    }
    return total;
}

HolderFit harmonic_holder_fit(const ModelParams& m, const SimScheme& s,
                              const std::function<double(const Vec&)>& g, const Vec& x0,
                              const Vec& direction, const HarmonicHolderOptions& opt,
                              ExecMode mode) {
    if (opt.window.h_lo < 0.02)
        throw InvalidParams("harmonic_holder_fit: increments below the MC noise floor");
    if (norm(x0) + opt.window.h_hi > 0.5)
        throw InvalidParams("harmonic_holder_fit: probes must stay in B(0, 1/2)");
    const Vec dir = normalized(direction);
    const int k = opt.window.n;
    std::vector<double> hs(k);
    for (int i = 0; i < k; ++i)
        hs[i] = opt.window.h_lo *
                std::pow(opt.window.h_hi / opt.window.h_lo, static_cast<double>(i) / (k - 1));

    const JumpSampler js(m, s.mode == SimMode::jump_split ? s.eps : 1.0);
    SimScheme scheme = s;
    scheme.fixed_step = true; // common random numbers need a shared step grid

    std::vector<std::vector<double>> deltas(k, std::vector<double>(opt.n));
    for_each_index(opt.n, mode, [&](std::int64_t i) {
        // identical streams across start points couple the paths
        CounterRng rng0(opt.seed, static_cast<std::uint64_t>(i));
        const double base = g(sample_exit(m, scheme, kUnitBall, x0, rng0, &js).x_exit);
        for (int j = 0; j < k; ++j) {
            CounterRng rng(opt.seed, static_cast<std::uint64_t>(i));
            const Vec xp = add(x0, scale(dir, hs[j]));
            deltas[j][i] = g(sample_exit(m, scheme, kUnitBall, xp, rng, &js).x_exit) - base;
        }
    });

    std::vector<double> inc(k), noise(k);
    for (int j = 0; j < k; ++j) {
        const MeanStderr ms = mean_stderr(deltas[j]);
        inc[j] = std::fabs(ms.mean);
        noise[j] = ms.stderr_;
    }
    const double min_inc = *std::min_element(inc.begin(), inc.end());
    const double max_noise = *std::max_element(noise.begin(), noise.end());
    if (!(min_inc > 0.0) || max_noise > 0.3 * min_inc)
        throw FitUnstable("harmonic_holder_fit: MC noise above 30% of smallest increment");

    const LineFit f = log_log_fit(hs, inc);
    HolderFit out;
    out.exponent = f.slope;
    out.window = opt.window;
    out.r_squared = f.r_squared;
    out.modulus_model = ModulusModel::power;
    return out;
}

DecayReport boundary_decay_check(const ModelParams& m, const SimScheme& s, DecayKind kind,
                                 const DecayProfileSpec& spec, ExecMode mode) {
    DecayReport rep;
    const Vec dir = normalized(spec.direction);
    if (kind == DecayKind::exit_time) {
        for (int i = 0; i < spec.n_pts; ++i) {
            const double a = spec.lo + (spec.hi - spec.lo) * i / (spec.n_pts - 1);
            SimScheme sch = s;
            sch.seed = s.seed + 1000 + i;
            const auto [est, se] =
                expected_exit_time(m, sch, kUnitBall, scale(dir, a), spec.n_mc, mode);
            (void)se;
            rep.abscissa.push_back(1.0 - a * a);
            rep.values.push_back(est);
        }
    } else if (kind == DecayKind::green) {
        const auto pot = potential_evaluator(m);
        const EmpiricalExit exits = harmonic_measure(m, s, {0, 0, 0}, spec.n_mc, mode);
        for (int i = 0; i < spec.n_pts; ++i) {
            const double f = static_cast<double>(i) / (spec.n_pts - 1);
            // log-spaced in the boundary distance
            const double gap = (1.0 - spec.hi) * std::pow((1.0 - spec.lo) / (1.0 - spec.hi), f);
            const Vec v = scale(dir, 1.0 - gap);
            rep.abscissa.push_back(gap);
            rep.values.push_back(green_from_exits(*pot, exits, {0, 0, 0}, v).estimate);
        }
    } else {
        const PoissonEstimator pe(m, s, {0, 0, 0}, spec.n_mc, mode);
        const bool boundary = spec.hi <= 1.5;
        for (int i = 0; i < spec.n_pts; ++i) {
            const double f_ = static_cast<double>(i) / (spec.n_pts - 1);
            const double r = spec.lo * std::pow(spec.hi / spec.lo, f_);
            const McEstimate p = pe.eval(scale(dir, r));
            rep.abscissa.push_back(boundary ? r - 1.0 : r);
            rep.values.push_back(p.estimate);
        }
    }
    rep.fit = log_log_fit(rep.abscissa, rep.values);
    return rep;
}

std::function<double(const Vec&)> make_boundary_data(const std::string& spec) {
    std::istringstream in(spec);
    std::string kind;
    std::getline(in, kind, ':');
    if (kind == "halfplane") {
        int axis = 1;
        in >> axis;
        if (axis < 1 || axis > 3) throw ConfigError("boundary data: bad axis");
        return [axis](const Vec& z) { return z[axis - 1] > 0.0 ? 1.0 : 0.0; };
    }
    if (kind == "ball") {
        std::string coords, rad;
        std::getline(in, coords, ':');
        std::getline(in, rad);
        std::istringstream cs(coords);
        Vec c{0, 0, 0};
        char comma;
        cs >> c[0] >> comma >> c[1];
        const double r = std::stod(rad);
        return [c, r](const Vec& z) { return dist(z, c) < r ? 1.0 : 0.0; };
    }
    if (kind == "cos") {
        int axis = 1;
        in >> axis;
        if (axis < 1 || axis > 3) throw ConfigError("boundary data: bad axis");
        return [axis](const Vec& z) { return std::cos(z[axis - 1]); };
    }
    throw ConfigError("boundary data: unknown kind '" + kind + "'");
}

} // namespace astab
