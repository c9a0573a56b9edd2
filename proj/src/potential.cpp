#include "anisostable/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "anisostable/errors.hpp"
#include "anisostable/levy_measure.hpp"
#include "anisostable/parallel.hpp"
#include "anisostable/quadrature.hpp"
#include "anisostable/symbol.hpp"

namespace astab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// alpha * int over s of s^{d+|beta|-alpha-1} D^beta p_1(s theta):
// near part on [0,1] with the algebraic weight absorbed by substitution,
// far part on dyadic panels with a fitted geometric tail.
double radial_value(const ModelParams& m, const Vec& theta, const MultiIndex& beta) {
    const int nb = beta.order();
    const double expo = m.d + nb - m.alpha; // s-weight is s^{expo - 1}
    const double rel = 1e-5;
    auto dp = [&](double s) {
        return density_derivative_point_tol(m, 1.0, scale(theta, s), beta, rel);
    };

    const double near =
        (m.alpha / expo) *
        gauss_integrate([&](double w) { return dp(std::pow(w, 1.0 / expo)); }, 0.0, 1.0, 32);

    auto panel = [&](double a, double b) {
        return m.alpha * gauss_integrate([&](double s) { return std::pow(s, expo - 1.0) * dp(s); },
                                         a, b, 12);
    };

    double far = 0.0;
    double prev = 0.0, last = 0.0;
    bool truncated = false;
    for (int j = 0; j < 9; ++j) {
        const double cur = panel(std::pow(2.0, j), std::pow(2.0, j + 1));
        far += cur;
        prev = last;
        last = cur;
        if (nb == 0 && far > 1e6 * std::max(near, 1e-300)) return kInf;
        // remaining tail already below the integration noise floor
        if (std::fabs(cur) < 1e-12 * (std::fabs(near) + std::fabs(far))) {
            truncated = true;
            break;
        }
    }
    if (!truncated && std::fabs(prev) > 0.0) {
        const double q = last / prev;
        // Non-contracting dyadic tail with panels still carrying real mass:
        // the direction has infinite potential.  Panels already down at the
        // quadrature noise floor are treated as a finished tail instead.
        const double scale_now = std::fabs(near) + std::fabs(far);
        if (q >= 0.97 && std::fabs(last) > 1e-4 * scale_now) return kInf;
        if (std::fabs(q) < 0.97 && std::fabs(last) > 1e-12 * scale_now)
            far += last * q / (1.0 - q);
    }
    return near + far;
}

} // namespace

double potential_direction(const ModelParams& m, const Vec& theta) {
    return radial_value(m, normalized(theta), MultiIndex{});
}

double potential(const ModelParams& m, const Vec& x) {
    const double r = norm(x);
    if (r < 1e-300) throw OriginSingularity("potential: x = 0");
    const double v = potential_direction(m, scale(x, 1.0 / r));
    return std::isinf(v) ? v : std::pow(r, m.alpha - m.d) * v;
}

PotentialDerivative potential_derivative(const ModelParams& m, const Vec& x,
                                         const MultiIndex& beta) {
    const double r = norm(x);
    if (r < 1e-300) throw OriginSingularity("potential_derivative: x = 0");
    if (beta.order() > 3) throw InvalidParams("potential_derivative: |beta| must be at most 3");
    PotentialDerivative out;
    const SmoothnessIndices si = gamma_estimate(m, false);
    out.out_of_theorem = (beta.order() >= si.kappa0);
    const double v = radial_value(m, scale(x, 1.0 / r), beta);
    out.value = std::isinf(v) ? v : std::pow(r, m.alpha - m.d - beta.order()) * v;
    return out;
}

double potential_of_measure(const ModelParams& m, const std::vector<WeightedPoint>& mass,
                            const Vec& x) {
    double acc = 0.0;
    for (const WeightedPoint& wp : mass) {
        const Vec dxv = sub(x, wp.point);
        if (norm(dxv) < 1e-9) throw SupportHit("potential_of_measure: x meets the support");
        acc += wp.weight * potential(m, dxv);
    }
    return acc;
}

PotentialEvaluator::PotentialEvaluator(const ModelParams& m, int directions) : m_(m) {
    if (m.d != 2) throw InvalidParams("PotentialEvaluator: d = 2 only");
    homogeneity_ = m.alpha - m.d;

    // direction profile is pi-periodic; split at atom angles and their
    // perpendiculars, where |<theta, xi>|-type creases sit
    std::vector<double> knots{0.0, M_PI};
    for (const Atom& a : m_.mu.atoms) {
        const double th = plane_angle(a.dir);
        for (double cand : {th, th + M_PI_2}) {
            double c = std::fmod(cand, M_PI);
            if (c < 0) c += M_PI;
            if (c > 1e-12 && c < M_PI - 1e-12) knots.push_back(c);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(),
                            [](double a, double b) { return std::fabs(a - b) < 1e-10; }),
                knots.end());
    knots_ = knots;

    const int segs = static_cast<int>(knots_.size()) - 1;
    seg_values_.resize(segs);
    seg_counts_.resize(segs);
    for (int s = 0; s < segs; ++s) {
        const double len = knots_[s + 1] - knots_[s];
        seg_counts_[s] = std::max(8, static_cast<int>(std::lround(directions * len / M_PI)));
        seg_values_[s].resize(seg_counts_[s] + 1);
    }
    for (int s = 0; s < segs; ++s) {
        const double lo = knots_[s], hi = knots_[s + 1];
        const int n = seg_counts_[s];
        auto& vals = seg_values_[s];
        for_each_index(n + 1, ExecMode::parallel, [&](std::int64_t i) {
            const double th = lo + (hi - lo) * static_cast<double>(i) / n;
            vals[i] = potential_direction(m_, unit_from_angle(th));
        });
    }
}

double PotentialEvaluator::direction_value(double theta) const {
    double t = std::fmod(theta, M_PI);
    if (t < 0) t += M_PI;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    int s = static_cast<int>(it - knots_.begin()) - 1;
    s = std::clamp(s, 0, static_cast<int>(seg_values_.size()) - 1);
    const double lo = knots_[s], hi = knots_[s + 1];
    const int n = seg_counts_[s];
    double u = (t - lo) / (hi - lo) * n;
    int i1 = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
    const double f = u - i1;
    const auto& v = seg_values_[s];
    const double p1 = v[i1], p2 = v[i1 + 1];
    const double p0 = (i1 > 0) ? v[i1 - 1] : 2 * p1 - p2;
    const double p3 = (i1 + 2 <= n) ? v[i1 + 2] : 2 * p2 - p1;
    return p1 + 0.5 * f * (p2 - p0 + f * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                          f * (3 * (p1 - p2) + p3 - p0)));
}

double PotentialEvaluator::operator()(const Vec& x) const {
    const double r = norm(x);
    if (r < 1e-300) throw OriginSingularity("PotentialEvaluator: x = 0");
    return std::pow(r, homogeneity_) * direction_value(std::atan2(x[1], x[0]));
}

std::shared_ptr<const PotentialEvaluator> potential_evaluator(const ModelParams& m,
                                                              int directions) {
    static std::map<std::string, std::shared_ptr<const PotentialEvaluator>> cache;
    static std::mutex mtx;
    std::string key;
    auto put = [&key](double v) {
        key.append(reinterpret_cast<const char*>(&v), sizeof(double));
    };
    put(m.d);
    put(m.alpha);
    put(directions);
    put(m.mu.kind == MeasureKind::atomic ? 1.0 : 2.0);
    for (const Atom& a : m.mu.atoms) {
        put(a.dir[0]);
        put(a.dir[1]);
        put(a.weight);
    }
    for (double v : m.mu.density) put(v);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto eval = std::make_shared<const PotentialEvaluator>(m, directions);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(std::move(key), eval);
    return eval;
}

HolderFit holder_exponent_fit(const std::function<double(const Vec&)>& f, const Vec& x0,
                              const Vec& direction, const HolderWindow& window,
                              bool second_difference) {
    if (!(window.h_lo > 0.0) || !(window.h_hi > window.h_lo) || window.n < 4)
        throw InvalidParams("holder_exponent_fit: bad window");
    const Vec dir = normalized(direction);
    const double f0 = f(x0);
    std::vector<double> hs(window.n), deltas(window.n);
    for (int i = 0; i < window.n; ++i) {
        const double h =
            window.h_lo * std::pow(window.h_hi / window.h_lo,
                                   static_cast<double>(i) / (window.n - 1));
        hs[i] = h;
        if (second_difference)
            deltas[i] = std::fabs(f(add(x0, scale(dir, h))) + f(sub(x0, scale(dir, h))) -
                                  2.0 * f0);
        else
            deltas[i] = std::fabs(f(add(x0, scale(dir, h))) - f0);
    }

    const LineFit power = log_log_fit(hs, deltas);

    // competing modulus h^k log(2 + 1/h): divide it out and refit
    std::vector<double> reduced(window.n);
    for (int i = 0; i < window.n; ++i)
        reduced[i] = deltas[i] / std::log(2.0 + 1.0 / hs[i]);
    const LineFit plog = log_log_fit(hs, reduced);

    HolderFit out;
    out.exponent = power.slope;
    out.window = window;
    out.r_squared = power.r_squared;
    out.modulus_model =
        (plog.r_squared > power.r_squared + 1e-6) ? ModulusModel::power_log : ModulusModel::power;
    if (power.r_squared < 0.98 && plog.r_squared < 0.98)
        throw FitUnstable("holder_exponent_fit: R^2 below 0.98");
    return out;
}

} // namespace astab
