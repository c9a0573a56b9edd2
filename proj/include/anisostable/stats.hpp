#ifndef ANISOSTABLE_STATS_HPP
#define ANISOSTABLE_STATS_HPP

#include <cstddef>
#include <vector>

namespace astab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// slope of log(y) against log(x); entries with y <= 0 are dropped
LineFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

MeanStderr mean_stderr(const std::vector<double>& v);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
double ks_two_sample_stat(std::vector<double> a, std::vector<double> b);
double kolmogorov_q(double lambda); // P(D > lambda) limit law
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

} // namespace astab

#endif
