#include "anisostable/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anisostable/errors.hpp"
#include "anisostable/stats.hpp"

namespace astab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<std::pair<double, double>> ray_ball_interval(const Vec& xi, const Vec& x,
                                                           double r) {
    // s^2 - 2 s <xi,x> + |x|^2 - r^2 < 0
    const double b = dot(xi, x);
    const double c = norm2(x) - r * r;
    const double disc = b * b - c;
    if (disc <= 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    double lo = b - sq, hi = b + sq;
    if (hi <= 0.0) return std::nullopt;
    lo = std::max(lo, 0.0);
    return std::make_pair(lo, hi);
}

double radial_mass(double a, double b, double alpha) {
    if (b <= a) return 0.0;
    if (a <= 0.0) return kInf;
    const double ta = std::pow(a, -alpha);
    const double tb = std::isinf(b) ? 0.0 : std::pow(b, -alpha);
    return (ta - tb) / alpha;
}

namespace {

// ray mass through the ball, 0 when the ray misses it
double ray_mass(const Vec& xi, const Vec& x, double r, double alpha) {
    auto iv = ray_ball_interval(xi, x, r);
    if (!iv) return 0.0;
    return radial_mass(iv->first, iv->second, alpha);
}

double nu_ball_density(const ModelParams& m, const Vec& x, double r) {
    const std::size_t n = m.mu.density.size();
    const double h = 2.0 * M_PI / n;
    const double ax = norm(x);

    // rays hit the ball only within the tangency cone around the direction
    // of x; split integration cells there so the integrand kink is resolved
    std::vector<double> splits;
    if (ax > r) {
        const double phi = plane_angle(x);
        const double half = std::asin(std::min(1.0, r / ax));
        for (double t : {phi - half, phi + half, phi + M_PI - half, phi + M_PI + half}) {
            double u = std::fmod(t, 2.0 * M_PI);
            if (u < 0) u += 2.0 * M_PI;
            splits.push_back(u);
        }
        std::sort(splits.begin(), splits.end());
    }

    double total = 0.0;
    const int refine = 8; // trapezoid refinement inside each table cell
    for (std::size_t i = 0; i < n; ++i) {
        const double rho_i = m.mu.density[i];
        if (rho_i == 0.0) continue;
        double a = i * h;
        const double cell_end = (i + 1) * h;
        // sub-segments at tangency angles inside this cell
        std::vector<double> edges{a};
        for (double s : splits)
            if (s > a + 1e-15 && s < cell_end - 1e-15) edges.push_back(s);
        edges.push_back(cell_end);
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double lo = edges[e], hi = edges[e + 1];
            const double step = (hi - lo) / refine;
            double acc = 0.0;
            for (int k = 0; k <= refine; ++k) {
                const double th = lo + k * step;
                const double w = (k == 0 || k == refine) ? 0.5 : 1.0;
                const double f = ray_mass(unit_from_angle(th), x, r, m.alpha);
                if (std::isinf(f)) return kInf;
                acc += w * f;
            }
            total += rho_i * acc * step;
        }
    }
    return total;
}

} // namespace

double nu_ball(const ModelParams& m, const Vec& x, double r) {
    if (!(r > 0.0)) throw DomainError("nu_ball: radius must be positive");
    if (norm(x) <= r) return kInf;
    if (m.mu.kind == MeasureKind::atomic) {
        double total = 0.0;
        for (const Atom& a : m.mu.atoms) total += a.weight * ray_mass(a.dir, x, r, m.alpha);
        return total;
    }
    return nu_ball_density(m, x, r);
}

double nu_tail(const ModelParams& m, double R) {
    if (!(R > 0.0)) throw DomainError("nu_tail: radius must be positive");
    return m.mu.total_mass * std::pow(R, -m.alpha) / m.alpha;
}

double nu_singular_integral(const ModelParams& m, const Vec& x, double rho, double a) {
    const SmoothnessIndices si = gamma_estimate(m, false);
    if (!(a > 0.0) || a >= si.gamma)
        throw DomainError("nu_singular_integral: need 0 < a < gamma");
    const double ax = norm(x);
    if (!(rho > 0.0) || rho >= 0.5 * ax)
        throw DomainError("nu_singular_integral: need 0 < rho < |x|/2");

    // dyadic shells B(x, rho 2^-n) \ B(x, rho 2^-n-1); the weight uses the
    // geometric-mean shell radius so the sum tracks the integral, not just
    // the upper bound
    double total = 0.0;
    double outer = nu_ball(m, x, rho);
    double r_out = rho;
    for (int n = 0; n < 200; ++n) {
        const double r_in = 0.5 * r_out;
        const double inner = nu_ball(m, x, r_in);
        const double shell = outer - inner;
        if (shell > 0.0) {
            const double w = std::pow(r_out * M_SQRT1_2, -a);
            total += w * shell;
        }
        if (inner <= 0.0) break;
        if (total > 0.0 && inner * std::pow(r_in, -a) < 1e-16 * total) break;
        outer = inner;
        r_out = r_in;
    }
    return total;
}

GammaProbeFit gamma_probe_fit(const ModelParams& m, int n_probe) {
    if (m.d != 2) throw InvalidParams("gamma_probe_fit: implemented for d = 2");
    if (n_probe < 4) throw InvalidParams("gamma_probe_fit: need at least 4 probes");
    GammaProbeFit out;
    out.min_slope = kInf;
    out.max_slope = -kInf;
    std::vector<double> radii, masses;
    for (int k = 3; k <= 10; ++k) radii.push_back(std::pow(2.0, -k));
    for (int p = 0; p < n_probe; ++p) {
        const Vec xp = unit_from_angle(2.0 * M_PI * p / n_probe);
        masses.clear();
        std::vector<double> rr;
        for (double r : radii) {
            const double v = nu_ball(m, xp, r);
            if (v > 0.0 && std::isfinite(v)) {
                rr.push_back(r);
                masses.push_back(v);
            }
        }
        if (rr.size() < 4) continue; // direction carries no constraint
        const LineFit f = log_log_fit(rr, masses);
        out.min_slope = std::min(out.min_slope, f.slope);
        out.max_slope = std::max(out.max_slope, f.slope);
        ++out.probes_used;
    }
    if (out.probes_used == 0) throw FitUnstable("gamma_probe_fit: no probe saw mass");
    return out;
}

SmoothnessIndices gamma_estimate(const ModelParams& m, bool run_probe_fit) {
    SmoothnessIndices si;
    if (m.mu.kind == MeasureKind::atomic) {
        // rays deposit mass ~ r on spheres through their support
        si.gamma = 1.0;
    } else {
        // bounded angular density: ball masses on the sphere are O(r^d)
        si.gamma = static_cast<double>(m.d);
        if (run_probe_fit) {
            const GammaProbeFit f = gamma_probe_fit(m);
            si.fitted_gamma = std::clamp(f.min_slope, 1.0, static_cast<double>(m.d));
            if (std::fabs(f.min_slope - si.gamma) > 0.2) si.fit_warning = true;
        }
    }

    const double d = static_cast<double>(m.d);
    si.kappa0 = si.gamma - (d - 2.0 * m.alpha);
    si.kappa1 = si.gamma - (d - m.alpha);

    const double k0 = si.kappa0;
    const auto near_int = [](double v) { return std::fabs(v - std::round(v)) < 1e-9; };
    if (k0 <= 0.0)
        si.potential_class = PotentialClass::none;
    else if (near_int(k0))
        si.potential_class = PotentialClass::holder_kappa0_minus;
    else
        si.potential_class = PotentialClass::holder_kappa0;

    const double k1 = si.kappa1;
    if (k1 > 0.0) {
        const bool alpha_is_one = std::fabs(m.alpha - 1.0) < 1e-12;
        const bool gamma_is_d = std::fabs(si.gamma - d) < 1e-9;
        if (m.alpha < 1.0 && !alpha_is_one) {
            si.rho = k1;
            si.modulus_model = ModulusModel::power;
        } else if (alpha_is_one && !gamma_is_d) {
            si.rho = k1;
            si.modulus_model = ModulusModel::power_log;
        } else if (alpha_is_one && gamma_is_d) {
            si.rho = 1.0;
            si.modulus_model = ModulusModel::power_log2;
        } else if (std::fabs(k1 - 1.0) < 1e-9) { // alpha > 1
            si.rho = (2.0 - m.alpha) / m.alpha;
            si.modulus_model = ModulusModel::power_log;
        } else { // alpha > 1, kappa1 != 1
            si.rho = (2.0 - m.alpha) / m.alpha * std::min(k1, 1.0);
            si.modulus_model = ModulusModel::power;
        }
    }
    return si;
}

} // namespace astab
