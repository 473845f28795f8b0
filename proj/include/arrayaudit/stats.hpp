#ifndef ARRAYAUDIT_STATS_HPP
#define ARRAYAUDIT_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

// Small numeric helpers shared by the detectors. Missing values (NaN) are
// skipped wherever a function says "non-missing".

namespace arrayaudit::stats {

struct Moments {
    std::size_t n = 0;
    double mean = 0;
    double sum_sq = 0;  // sum of squared deviations from the mean
};

/** Mean and centred sum of squares over non-missing entries. */
Moments moments(std::span<const double> x);

/**
 * Pearson correlation over pairs where both entries are present.
 * Returns NaN when fewer than two complete pairs remain or either side has
 * zero variance.
 */
double pearson(std::span<const double> x, std::span<const double> y);

/**
 * Vector centred and scaled to unit Euclidean norm, so that the dot product
 * of two such vectors is their Pearson correlation. Returns an empty vector
 * for zero-variance input. Requires no missing entries.
 */
std::vector<double> unit_centered(std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);

/** Standard normal density and distribution function. */
double normal_pdf(double x);
double normal_cdf(double x);

/** log(Phi(x)), accurate far into the lower tail. */
double log_normal_cdf(double x);

/** phi(x) / Phi(x), accurate far into the lower tail. */
double inverse_mills(double x);

/** Sample quantile with linear interpolation between order statistics. */
double quantile(std::vector<double> x, double p);

/**
 * Pooled-variance two-sample t statistic, mean(a) - mean(b) over its
 * standard error. Infinite when the pooled variance is zero and the means
 * differ; zero when both are equal.
 */
double pooled_t(std::span<const double> a, std::span<const double> b);

}  // namespace arrayaudit::stats

#endif
