#include "anisostable/stats.hpp"

#include <algorithm>
#include <cmath>

#include "anisostable/errors.hpp"

namespace astab {

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw FitUnstable("least_squares: need at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw FitUnstable("least_squares: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

LineFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 3) throw FitUnstable("log_log_fit: fewer than three positive samples");
    return least_squares(lx, ly);
}

MeanStderr mean_stderr(const std::vector<double>& v) {
    MeanStderr r;
    r.n = v.size();
    if (r.n == 0) return r;
    double s = 0;
    for (double u : v) s += u;
    r.mean = s / r.n;
    if (r.n < 2) return r;
    double q = 0;
    for (double u : v) q += (u - r.mean) * (u - r.mean);
    r.stderr_ = std::sqrt(q / (static_cast<double>(r.n) * (r.n - 1)));
    return r;
}

double ks_two_sample_stat(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n && j < m) {
        const double v = std::min(a[i], b[j]);
        while (i < n && a[i] <= v) ++i;
        while (j < m && b[j] <= v) ++j;
        d = std::max(d, std::fabs(double(i) / n - double(j) / m));
    }
    return d;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        q += term;
        if (std::fabs(term) < 1e-16) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double d = ks_two_sample_stat(std::move(a), std::move(b));
    const double ne = std::sqrt(n * m / (n + m));
    // Stephens' small-sample correction
    return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

} // namespace astab
