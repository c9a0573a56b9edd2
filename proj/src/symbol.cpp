#include "anisostable/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "anisostable/errors.hpp"
#include "anisostable/quadrature.hpp"

namespace astab {

double stable_norm_constant(double alpha) {
    return M_PI / (2.0 * std::sin(M_PI * alpha / 2.0) * std::tgamma(1.0 + alpha));
}

namespace {

// integral of |cos(theta - phi)|^alpha * rho(theta) over one table cell,
// split at the kink angles and geometrically graded towards them (the
// one-sided derivative of |cos|^alpha blows up there for alpha < 1)
double cell_integral(double a, double b, double phi, double alpha, int subdivisions) {
    auto f = [&](double th) { return std::pow(std::fabs(std::cos(th - phi)), alpha); };

    std::vector<double> edges{a, b};
    // kinks of |cos(. - phi)| at phi + pi/2 (mod pi)
    const double k0 = phi + M_PI_2;
    for (int j = -4; j <= 4; ++j) {
        const double k = k0 + j * M_PI;
        if (k > a + 1e-14 && k < b - 1e-14) edges.push_back(k);
    }
    std::sort(edges.begin(), edges.end());

    double total = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        double lo = edges[e], hi = edges[e + 1];
        // detect whether an endpoint is a kink and grade towards it
        const bool kink_lo = std::fabs(std::cos(lo - phi)) < 1e-12;
        const bool kink_hi = std::fabs(std::cos(hi - phi)) < 1e-12;
        std::vector<std::pair<double, double>> panels;
        const int grade = 8;
        if (kink_lo && !kink_hi) {
            double w = hi - lo;
            for (int j = grade; j >= 1; --j)
                panels.emplace_back(lo + w * std::pow(4.0, -j), lo + w * std::pow(4.0, -(j - 1)));
            panels.emplace_back(lo, lo + w * std::pow(4.0, -grade));
        } else if (kink_hi && !kink_lo) {
            double w = hi - lo;
            for (int j = grade; j >= 1; --j)
                panels.emplace_back(hi - w * std::pow(4.0, -(j - 1)), hi - w * std::pow(4.0, -j));
            panels.emplace_back(hi - w * std::pow(4.0, -grade), hi);
        } else {
            const double step = (hi - lo) / subdivisions;
            for (int j = 0; j < subdivisions; ++j)
                panels.emplace_back(lo + j * step, lo + (j + 1) * step);
        }
        for (auto [plo, phi_] : panels) total += gauss_integrate(f, plo, phi_, 16);
    }
    return total;
}

double char_exponent_density(const ModelParams& m, const Vec& u) {
    const double au = norm(u);
    if (au == 0.0) return 0.0;
    const double phi_u = plane_angle(u);
    const std::size_t n = m.mu.density.size();
    const double h = 2.0 * M_PI / n;
    const int subs = std::max<int>(1, static_cast<int>(std::ceil(4096.0 / (16.0 * n))));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (m.mu.density[i] == 0.0) continue;
        acc += m.mu.density[i] * cell_integral(i * h, (i + 1) * h, phi_u, m.alpha, subs);
    }
    return stable_norm_constant(m.alpha) * std::pow(au, m.alpha) * acc;
}

} // namespace

double char_exponent(const ModelParams& m, const Vec& u) {
    if (m.mu.kind == MeasureKind::atomic) {
        double acc = 0.0;
        for (const Atom& a : m.mu.atoms)
            acc += a.weight * std::pow(std::fabs(dot(u, a.dir)), m.alpha);
        return stable_norm_constant(m.alpha) * acc;
    }
    return char_exponent_density(m, u);
}

std::pair<double, double> phi_sphere_bounds(const ModelParams& m, int n_probe) {
    if (n_probe < 8) throw InvalidParams("phi_sphere_bounds: need n_probe >= 8");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    if (m.d == 2) {
        for (int k = 0; k < n_probe; ++k) {
            const double v = char_exponent(m, unit_from_angle(2.0 * M_PI * k / n_probe));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    } else {
        // Fibonacci lattice on the 2-sphere
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < n_probe; ++k) {
            const double z = 1.0 - (2.0 * k + 1.0) / n_probe;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double th = ga * k;
            const double v = char_exponent(m, vec3(r * std::cos(th), r * std::sin(th), z));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (lo <= 1e-12 * hi)
        throw NondegeneracyViolated("phi_sphere_bounds: symbol vanishes on the sphere");
    return {lo, hi};
}

AngularSymbol::AngularSymbol(const ModelParams& m, int table_size)
    : alpha_(m.alpha),
      norm_const_(stable_norm_constant(m.alpha)),
      atomic_(m.mu.kind == MeasureKind::atomic) {
    if (m.d != 2) throw InvalidParams("AngularSymbol: d = 2 only");
    if (atomic_) {
        for (const Atom& a : atom_pairs(m.mu)) {
            const double th = plane_angle(a.dir);
            pair_angles_.push_back(th);
            pair_weights_.push_back(a.weight); // combined weight of {xi, -xi}
            double k = std::fmod(th + M_PI_2, M_PI);
            if (k < 0) k += M_PI;
            kinks_.push_back(k);
        }
        std::sort(kinks_.begin(), kinks_.end());
    } else {
        table_.resize(table_size);
        for (int i = 0; i < table_size; ++i)
            table_[i] = char_exponent(m, unit_from_angle(2.0 * M_PI * i / table_size));
    }
    min_ = std::numeric_limits<double>::infinity();
    max_ = 0.0;
    const int probes = 4096;
    for (int i = 0; i < probes; ++i) {
        const double v = (*this)(2.0 * M_PI * i / probes);
        min_ = std::min(min_, v);
        max_ = std::max(max_, v);
    }
}

const AngularSymbol& angular_symbol(const ModelParams& m) {
    static std::map<std::string, AngularSymbol> cache;
    static std::mutex mtx;
    // exact content key: dimension, alpha, atoms or density table
    std::string key;
    key.reserve(64 + 24 * m.mu.atoms.size() + 8 * m.mu.density.size());
    auto put = [&key](double v) {
        key.append(reinterpret_cast<const char*>(&v), sizeof(double));
    };
    put(static_cast<double>(m.d));
    put(m.alpha);
    put(m.mu.kind == MeasureKind::atomic ? 1.0 : 2.0);
    for (const Atom& a : m.mu.atoms) {
        put(a.dir[0]);
        put(a.dir[1]);
        put(a.dir[2]);
        put(a.weight);
    }
    for (double v : m.mu.density) put(v);

    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(std::piecewise_construct, std::forward_as_tuple(key),
                           std::forward_as_tuple(m)).first;
    return it->second;
}

double AngularSymbol::operator()(double theta) const {
    if (atomic_) {
        double acc = 0.0;
        for (std::size_t j = 0; j < pair_angles_.size(); ++j)
            acc += pair_weights_[j] *
                   std::pow(std::fabs(std::cos(theta - pair_angles_[j])), alpha_);
        return norm_const_ * acc;
    }
    // periodic Catmull-Rom interpolation on the dense table
    const int n = static_cast<int>(table_.size());
    double t = theta / (2.0 * M_PI) * n;
    t -= std::floor(t / n) * n;
    int i1 = static_cast<int>(std::floor(t));
    const double s = t - i1;
    i1 = ((i1 % n) + n) % n;
    const int i0 = (i1 + n - 1) % n, i2 = (i1 + 1) % n, i3 = (i1 + 2) % n;
    const double p0 = table_[i0], p1 = table_[i1], p2 = table_[i2], p3 = table_[i3];
    return p1 + 0.5 * s * (p2 - p0 + s * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                          s * (3 * (p1 - p2) + p3 - p0)));
}

} // namespace astab
