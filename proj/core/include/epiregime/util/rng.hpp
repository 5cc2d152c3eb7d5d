#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace epiregime {

namespace detail {
// SplitMix64 finaliser, used to mix keys into seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

class RngStream;

/// Hierarchical stream key. Folding an integer derives an independent child
/// key, so per-chain / per-particle / per-step streams can be constructed
/// deterministically without carrying generator state around. This is what
/// makes particle loops safe to parallelise and runs checkpoint-resumable.
class RngKey {
public:
    explicit RngKey(std::uint64_t seed)
        : hi_(detail::splitmix64(seed)), lo_(detail::splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    RngKey fold(std::uint64_t k) const {
        RngKey out(*this);
        out.hi_ = detail::splitmix64(hi_ ^ detail::splitmix64(k + 0x1000));
        out.lo_ = detail::splitmix64(lo_ + detail::splitmix64(k));
        return out;
    }

    inline RngStream stream() const;

private:
    std::uint64_t hi_;
    std::uint64_t lo_;
};

/// Random stream owned by exactly one caller at a time. Thin wrapper over
/// std::mt19937_64 with the draw helpers the model code needs.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}
    RngStream(std::uint64_t hi, std::uint64_t lo) {
        std::seed_seq seq{static_cast<std::uint32_t>(hi >> 32), static_cast<std::uint32_t>(hi),
                          static_cast<std::uint32_t>(lo >> 32), static_cast<std::uint32_t>(lo)};
        gen_.seed(seq);
    }

    std::mt19937_64& engine() { return gen_; }

    /// Uniform on [0, 1).
    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    double normal() {
        return std::normal_distribution<double>(0.0, 1.0)(gen_);
    }

    double gamma(double shape, double scale) {
        return std::gamma_distribution<double>(shape, scale)(gen_);
    }

    double beta(double a, double b) {
        const double x = gamma(a, 1.0);
        const double y = gamma(b, 1.0);
        // keep draws strictly interior; shape < 1 can underflow to 0
        return std::min(std::max(x / (x + y), 1e-12), 1.0 - 1e-12);
    }

    long poisson(double mean) {
        return std::poisson_distribution<long>(mean)(gen_);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Index draw from an (unnormalised) nonnegative weight vector.
    int categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    std::vector<double> dirichlet(std::span<const double> conc) {
        std::vector<double> x(conc.size());
        double total = 0.0;
        for (std::size_t i = 0; i < conc.size(); ++i) {
            x[i] = gamma(conc[i], 1.0);
            total += x[i];
        }
        for (double& v : x) v /= total;
        return x;
    }

private:
    std::mt19937_64 gen_;
};

inline RngStream RngKey::stream() const { return RngStream(hi_, lo_); }

}  // namespace epiregime
