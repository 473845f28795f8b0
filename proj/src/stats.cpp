#include "arrayaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace arrayaudit::stats {

Moments moments(std::span<const double> x) {
    Moments m;
    for (double v : x) {
        if (!std::isnan(v)) {
            ++m.n;
            m.mean += v;
        }
    }
    if (m.n == 0) {
        return m;
    }
    m.mean /= static_cast<double>(m.n);
    for (double v : x) {
        if (!std::isnan(v)) {
            m.sum_sq += (v - m.mean) * (v - m.mean);
        }
    }
    return m;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = std::min(x.size(), y.size());
    double mx = 0, my = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) {
            continue;
        }
        mx += x[i];
        my += y[i];
        ++count;
    }
    if (count < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    mx /= static_cast<double>(count);
    my /= static_cast<double>(count);

    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) {
            continue;
        }
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0 || syy <= 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> unit_centered(std::span<const double> x) {
    auto m = moments(x);
    if (m.n != x.size()) {
        throw std::invalid_argument("unit_centered: missing values are not allowed");
    }
    if (!(m.sum_sq > 0)) {
        return {};
    }
    const double scale = 1.0 / std::sqrt(m.sum_sq);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = (x[i] - m.mean) * scale;
    }
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

// Below this, erfc underflows too early to be useful and the asymptotic
// series for the Mills ratio is already accurate to machine precision.
constexpr double kTail = -30.0;

// Asymptotic Phi(x)/phi(x) for large negative x.
double mills_ratio_tail(double x) {
    const double z = 1.0 / (x * x);
    return -(1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z)))) / x;
}

}  // namespace

double log_normal_cdf(double x) {
    if (x > kTail) {
        return std::log(normal_cdf(x));
    }
    return -0.5 * x * x - 0.5 * std::log(2 * std::numbers::pi) + std::log(mills_ratio_tail(x));
}

double inverse_mills(double x) {
    if (x > kTail) {
        return normal_pdf(x) / normal_cdf(x);
    }
    return 1.0 / mills_ratio_tail(x);
}

double quantile(std::vector<double> x, double p) {
    std::erase_if(x, [](double v) { return std::isnan(v); });
    if (x.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(x.begin(), x.end());
    const double h = (static_cast<double>(x.size()) - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double pooled_t(std::span<const double> a, std::span<const double> b) {
    auto ma = moments(a), mb = moments(b);
    if (ma.n < 2 || mb.n < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double diff = ma.mean - mb.mean;
    const double df = static_cast<double>(ma.n + mb.n - 2);
    const double pooled = (ma.sum_sq + mb.sum_sq) / df;
    if (!(pooled > 0)) {
        if (diff == 0) {
            return 0.0;
        }
        return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    const double se = std::sqrt(pooled * (1.0 / static_cast<double>(ma.n) + 1.0 / static_cast<double>(mb.n)));
    return diff / se;
}

}  // namespace arrayaudit::stats
