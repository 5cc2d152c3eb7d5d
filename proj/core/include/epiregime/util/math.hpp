#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace epiregime {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(std::span<const double> xs) {
    double m = neg_inf;
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;  // all -inf (or a +inf/nan propagates)
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

inline double log_add_exp(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

inline double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// log(sigmoid(x)), stable for large |x|.
inline double log_sigmoid(double x) {
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double square(double x) { return x * x; }

/// Empirical quantile with linear interpolation between order statistics
/// (the common "type 7" definition). q in [0, 1].
inline double quantile(std::vector<double> xs, double q) {
    const std::size_t n = xs.size();
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    if (q <= 0.0) return xs.front();
    if (q >= 1.0) return xs.back();
    const double h = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

/// Quantile of a weighted sample: invert the weighted empirical CDF over the
/// sorted values. Exactly invariant under permutations of (value, weight) pairs.
inline double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                                double q) {
    const std::size_t n = values.size();
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = q * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += weights[order[i]];
        if (cum >= target) return values[order[i]];
    }
    return values[order[n - 1]];
}

/// Streaming mean/variance accumulator (Welford).
class RunningMoments {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Sample variance (n-1 denominator).
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double sd() const { return std::sqrt(variance()); }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline double sample_mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
    RunningMoments m;
    for (double x : xs) m.add(x);
    return m.variance();
}

}  // namespace epiregime
