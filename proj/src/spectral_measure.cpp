#include "anisostable/spectral_measure.hpp"

#include <algorithm>
#include <cmath>

#include "anisostable/errors.hpp"

namespace astab {

namespace {

constexpr double kDirTol = 1e-3;   // accepted deviation of |dir| from 1 before normalization
constexpr double kMergeTol = 1e-12;
constexpr double kRankTol = 1e-8;  // smallest/largest eigenvalue ratio for nondegeneracy

// Largest and smallest eigenvalue of the symmetric positive semidefinite
// second-moment matrix M = sum w_i xi_i xi_i^T, via Jacobi sweeps.
std::pair<double, double> moment_eigen_range(const double m[3][3], int d) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = 0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-28) break;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) {
                if (std::fabs(a[p][q]) < 1e-30) continue;
                const double theta = 0.5 * std::atan2(2 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < d; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    double lo = a[0][0], hi = a[0][0];
    for (int i = 1; i < d; ++i) {
        lo = std::min(lo, a[i][i]);
        hi = std::max(hi, a[i][i]);
    }
    return {lo, hi};
}

void check_nondegenerate(const double m[3][3], int d, const char* what) {
    auto [lo, hi] = moment_eigen_range(m, d);
    if (hi <= 0.0 || lo <= kRankTol * hi)
        throw DegenerateMeasure(std::string(what) + ": support does not span R^d");
}

} // namespace

SpectralMeasure validate_spectral(const SpectralMeasure& raw, int d) {
    if (d < 2 || d > 3) throw InvalidParams("dimension must be 2 or 3");
    SpectralMeasure out;
    out.kind = raw.kind;

    if (raw.kind == MeasureKind::atomic) {
        if (raw.atoms.empty()) throw InvalidParams("atomic measure needs at least one atom");
        std::vector<Atom> sym;
        sym.reserve(2 * raw.atoms.size());
        for (const Atom& a : raw.atoms) {
            if (!(a.weight > 0.0) || !std::isfinite(a.weight))
                throw NegativeWeight("atom weight must be positive and finite");
            const double n = norm(a.dir);
            if (std::fabs(n - 1.0) > kDirTol)
                throw NonUnitDirection("atom direction norm deviates from 1 beyond tolerance");
            if (d == 2 && a.dir[2] != 0.0)
                throw InvalidParams("atom direction has a third component in d = 2");
            const Vec u = scale(a.dir, 1.0 / n);
            // symmetrize by splitting the weight between xi and -xi
            sym.push_back({u, 0.5 * a.weight});
            sym.push_back({neg(u), 0.5 * a.weight});
        }
        // merge coincident directions
        std::vector<Atom> merged;
        for (const Atom& a : sym) {
            bool found = false;
            for (Atom& b : merged) {
                if (dist(a.dir, b.dir) < kMergeTol) {
                    b.weight += a.weight;
                    found = true;
                    break;
                }
            }
            if (!found) merged.push_back(a);
        }
        out.atoms = std::move(merged);
        double mass = 0;
        double m[3][3] = {};
        for (const Atom& a : out.atoms) {
            mass += a.weight;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) m[i][j] += a.weight * a.dir[i] * a.dir[j];
        }
        out.total_mass = mass;
        check_nondegenerate(m, d, "atomic measure");
    } else {
        if (d != 2) throw InvalidParams("angular-density measures are supported in d = 2 only");
        const std::size_t n = raw.density.size();
        if (n < 2 || n % 2 != 0)
            throw InvalidParams("density table needs an even number of cells");
        double maxv = 0;
        for (double v : raw.density) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw NegativeWeight("density values must be nonnegative and finite");
            maxv = std::max(maxv, v);
        }
        if (maxv <= 0.0) throw InvalidParams("density table is identically zero");
        // symmetrize: average cells half a turn apart
        out.density.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.density[i] = 0.5 * (raw.density[i] + raw.density[(i + n / 2) % n]);
        const double h = 2.0 * M_PI / n;
        double mass = 0;
        double m[3][3] = {};
        for (std::size_t i = 0; i < n; ++i) {
            const double w = out.density[i] * h;
            mass += w;
            const double th = (i + 0.5) * h;
            const Vec u = unit_from_angle(th);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) m[a][b] += w * u[a] * u[b];
        }
        out.total_mass = mass;
        check_nondegenerate(m, 2, "density measure");
    }
    if (!(out.total_mass > 0.0)) throw InvalidParams("total mass must be positive");
    return out;
}

std::vector<Atom> atom_pairs(const SpectralMeasure& mu) {
    std::vector<Atom> pairs;
    std::vector<bool> used(mu.atoms.size(), false);
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        if (used[i]) continue;
        const Atom& a = mu.atoms[i];
        double w = a.weight;
        for (std::size_t j = i + 1; j < mu.atoms.size(); ++j) {
            if (!used[j] && dist(mu.atoms[j].dir, neg(a.dir)) < 1e-10) {
                w += mu.atoms[j].weight;
                used[j] = true;
                break;
            }
        }
        used[i] = true;
        pairs.push_back({a.dir, w});
    }
    return pairs;
}

ModelParams make_model(int d, double alpha, const SpectralMeasure& raw_mu) {
    if (d < 2 || d > 3) throw InvalidParams("dimension must be 2 or 3");
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidParams("alpha must lie in (0, 2)");
    ModelParams m;
    m.d = d;
    m.alpha = alpha;
    m.mu = validate_spectral(raw_mu, d);
    return m;
}

ModelParams make_atomic_model(int d, double alpha, const std::vector<Atom>& atoms) {
    SpectralMeasure mu;
    mu.kind = MeasureKind::atomic;
    mu.atoms = atoms;
    return make_model(d, alpha, mu);
}

ModelParams make_density_model(double alpha, const std::vector<double>& density_values) {
    SpectralMeasure mu;
    mu.kind = MeasureKind::angular_density;
    mu.density = density_values;
    return make_model(2, alpha, mu);
}

ModelParams make_isotropic_model(double alpha, double total_mass, int cells) {
    return make_density_model(alpha,
                              std::vector<double>(cells, total_mass / (2.0 * M_PI)));
}

const char* to_string(PotentialClass c) {
    switch (c) {
        case PotentialClass::holder_kappa0: return "C^{kappa0}_loc";
        case PotentialClass::holder_kappa0_minus: return "C^{kappa0-}_loc";
        default: return "none";
    }
}

const char* to_string(ModulusModel m) {
    switch (m) {
        case ModulusModel::power: return "power";
        case ModulusModel::power_log: return "power-log";
        default: return "power-log2";
    }
}

} // namespace astab
