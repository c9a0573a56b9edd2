#include "anisostable/radial_transform.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>

#include "anisostable/errors.hpp"

namespace astab {

namespace {

constexpr double kTauMax = 500.0;
constexpr int kTableSize = 8192;
constexpr double kPanelWidth = 0.02;

// moments int_0^h s^j trig(tau s) ds, j = 0..2, with series fallback for
// small phase increments
struct Moments {
    double c[3];
    double s[3];
};

Moments panel_moments(double tau, double h) {
    Moments mom;
    const double w = tau * h;
    if (std::fabs(w) < 0.5) {
        const double w2 = w * w;
        mom.c[0] = h * (1.0 - w2 / 6 * (1.0 - w2 / 20 * (1.0 - w2 / 42)));
        mom.s[0] = h * w * (0.5 - w2 / 24 * (1.0 - w2 / 30));
        const double h2 = h * h;
        mom.c[1] = h2 * (0.5 - w2 / 8 + w2 * w2 / 144 - w2 * w2 * w2 / 5760);
        mom.s[1] = h2 * w * (1.0 / 3 - w2 / 30 + w2 * w2 / 840);
        const double h3 = h2 * h;
        mom.c[2] = h3 * (1.0 / 3 - w2 / 10 + w2 * w2 / 168 - w2 * w2 * w2 / 6480);
        mom.s[2] = h3 * w * (0.25 - w2 / 36 + w2 * w2 / 960);
        return mom;
    }
    const double sw = std::sin(w), cw = std::cos(w);
    const double t1 = 1.0 / tau, t2 = t1 * t1, t3 = t2 * t1;
    mom.c[0] = sw * t1;
    mom.s[0] = (1.0 - cw) * t1;
    mom.c[1] = (cw + w * sw - 1.0) * t2;
    mom.s[1] = (sw - w * cw) * t2;
    mom.c[2] = (2.0 * w * cw + (w * w - 2.0) * sw) * t3;
    mom.s[2] = (2.0 * w * sw - (w * w - 2.0) * cw - 2.0) * t3;
    return mom;
}

} // namespace

RadialTransform::RadialTransform(double alpha, int m) : alpha_(alpha), m_(m) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidParams("RadialTransform: bad alpha");
    if (m < 0 || m > 8) throw InvalidParams("RadialTransform: bad power");
    tau_max_ = kTauMax;

    const double sigma_cut = std::pow(18.0 * std::log(10.0), 1.0 / alpha);
    const std::size_t n_panels =
        static_cast<std::size_t>(std::ceil(sigma_cut / kPanelWidth));
    if (n_panels > 2000000)
        throw NumericalError("RadialTransform: alpha too small for the profile table");
    const double h = sigma_cut / static_cast<double>(n_panels);

    // quadratic fit coefficients of sigma^m exp(-sigma^alpha) per panel
    std::vector<double> c0(n_panels), c1(n_panels), c2(n_panels);
    auto g = [&](double sigma) {
        return (m == 0 ? 1.0 : std::pow(sigma, m)) * std::exp(-std::pow(sigma, alpha));
    };
    for (std::size_t p = 0; p < n_panels; ++p) {
        const double a = p * h;
        const double g0 = (p == 0 && m == 0) ? 1.0 : g(a);
        const double g1 = g(a + 0.5 * h);
        const double g2 = g(a + h);
        c0[p] = g0;
        c1[p] = (-3.0 * g0 + 4.0 * g1 - g2) / h;
        c2[p] = (2.0 * g0 - 4.0 * g1 + 2.0 * g2) / (h * h);
    }

    cos_table_.resize(kTableSize);
    sin_table_.resize(kTableSize);
    u_step_ = std::asinh(tau_max_) / (kTableSize - 1);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < kTableSize; ++i) {
        const double tau = std::sinh(i * u_step_);
        const Moments mom = panel_moments(tau, h);
        // rotate cos/sin of tau*a across panels instead of calling trig
        const double dc = std::cos(tau * h), ds = std::sin(tau * h);
        double ca = 1.0, sa = 0.0;
        double acc_c = 0.0, acc_s = 0.0;
        for (std::size_t p = 0; p < n_panels; ++p) {
            const double qc = c0[p] * mom.c[0] + c1[p] * mom.c[1] + c2[p] * mom.c[2];
            const double qs = c0[p] * mom.s[0] + c1[p] * mom.s[1] + c2[p] * mom.s[2];
            acc_c += ca * qc - sa * qs;
            acc_s += sa * qc + ca * qs;
            const double cn = ca * dc - sa * ds;
            sa = sa * dc + ca * ds;
            ca = cn;
        }
        cos_table_[i] = acc_c;
        sin_table_[i] = acc_s;
    }
}

double RadialTransform::asymptotic_cos(double tau) const {
    // endpoint expansion of exp(-sigma^alpha) at sigma = 0
    double acc = 0.0, fact = 1.0;
    for (int k = 0; k <= 4; ++k) {
        if (k > 0) fact *= -k;
        const double s = m_ + k * alpha_ + 1.0;
        acc += std::tgamma(s) * std::cos(M_PI_2 * s) * std::pow(tau, -s) / fact;
    }
    return acc;
}

double RadialTransform::asymptotic_sin(double tau) const {
    double acc = 0.0, fact = 1.0;
    for (int k = 0; k <= 4; ++k) {
        if (k > 0) fact *= -k;
        const double s = m_ + k * alpha_ + 1.0;
        acc += std::tgamma(s) * std::sin(M_PI_2 * s) * std::pow(tau, -s) / fact;
    }
    return acc;
}

double RadialTransform::interp(const std::vector<double>& table, double tau,
                               double parity) const {
    const double u = std::asinh(tau) / u_step_;
    int i1 = static_cast<int>(std::floor(u));
    const int n = static_cast<int>(table.size());
    if (i1 < 0) i1 = 0;
    if (i1 > n - 2) i1 = n - 2;
    const double s = u - i1;
    // the profile extends evenly (cos) or oddly (sin) through tau = 0
    const double p0 = (i1 == 0) ? parity * table[1] : table[i1 - 1];
    const double p1 = table[i1];
    const double p2 = table[i1 + 1];
    const double p3 = table[std::min(n - 1, i1 + 2)];
    return p1 + 0.5 * s * (p2 - p0 + s * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                          s * (3 * (p1 - p2) + p3 - p0)));
}

double RadialTransform::eval_cos(double tau) const {
    const double at = std::fabs(tau);
    if (at >= tau_max_) return asymptotic_cos(at);
    return interp(cos_table_, at, 1.0);
}

double RadialTransform::eval_sin(double tau) const {
    const double at = std::fabs(tau);
    const double v = (at >= tau_max_) ? asymptotic_sin(at) : interp(sin_table_, at, -1.0);
    return tau < 0.0 ? -v : v;
}

const RadialTransform& radial_transform(double alpha, int m) {
    static std::map<std::pair<std::int64_t, int>, RadialTransform> cache;
    static std::mutex mtx;
    const std::pair<std::int64_t, int> key{static_cast<std::int64_t>(std::llround(alpha * 1e12)), m};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(std::piecewise_construct, std::forward_as_tuple(key),
                           std::forward_as_tuple(alpha, m)).first;
    return it->second;
}

} // namespace astab
