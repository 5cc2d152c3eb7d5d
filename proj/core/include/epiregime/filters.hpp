#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "epiregime/hsmm.hpp"
#include "epiregime/state_space.hpp"
#include "epiregime/util/errors.hpp"
#include "epiregime/util/math.hpp"
#include "epiregime/util/parallel.hpp"
#include "epiregime/util/rng.hpp"

namespace epiregime::filters {

enum class Resampler { systematic, multinomial };

struct FilterConfig {
    int particles = 128;  ///< M
    double resample_threshold = 0.5;
    Resampler resampler = Resampler::systematic;
    bool ancestor_sampling = false;  ///< conditional filter only
    int threads = 1;

    void validate() const {
        if (particles < 2) throw ValidationError("FilterConfig.particles must be >= 2");
        if (!(resample_threshold > 0.0 && resample_threshold <= 1.0))
            throw ValidationError("FilterConfig.resample_threshold must lie in (0,1]");
    }
};

/// Effective sample size of a log-weight vector: 1 / sum of squared
/// normalised weights.
inline double ess(std::span<const double> log_weights) {
    const double lse = log_sum_exp(log_weights);
    if (!std::isfinite(lse)) return 0.0;
    double sumsq = 0.0;
    for (double lw : log_weights) {
        const double w = std::exp(lw - lse);
        sumsq += w * w;
    }
    return 1.0 / sumsq;
}

/// Systematic (low-variance) resampling: one uniform, stratified inversion.
/// Expected offspring counts are M * w for normalised weights w.
std::vector<int> systematic_resample(std::span<const double> weights, int n_out, RngStream& rng);

std::vector<int> multinomial_resample(std::span<const double> weights, int n_out, RngStream& rng);

template <typename Model>
struct ParticleCloud {
    std::vector<typename Model::State> particles;
    std::vector<double> log_weights;  ///< normalised: logsumexp == 0
    std::vector<std::vector<hsmm::LatentState>> trajectories;
    double log_likelihood = 0.0;

    int size() const { return static_cast<int>(particles.size()); }
};

/// Particle filter advanced one observation at a time. A non-null reference
/// trajectory pins slot 0 (the conditional filter of Particle Gibbs): the
/// pinned slot replays the reference, survives every resampling step, and
/// optionally has its ancestry refreshed by ancestor sampling.
///
/// All randomness is derived from (key, t, slot), so identical keys give
/// bit-identical clouds regardless of the thread count.
template <typename Model>
class Filter {
public:
    Filter(const Model& model, const FilterConfig& cfg, RngKey key,
           std::vector<hsmm::LatentState> reference = {},
           std::optional<double> pin_log_weight_override = std::nullopt)
        : model_(&model),
          cfg_(cfg),
          key_(key),
          reference_(std::move(reference)),
          pin_override_(pin_log_weight_override) {
        if (cfg_.particles < 1) throw ValidationError("filter needs at least one particle");
        if (!reference_.empty() &&
            static_cast<int>(reference_.size()) < model_->horizon()) {
            throw ValidationError("reference trajectory shorter than the data horizon");
        }
    }

    bool conditional() const { return !reference_.empty(); }
    int time() const { return t_; }
    double log_likelihood() const { return log_lik_; }
    double last_increment() const { return last_increment_; }
    bool last_resampled() const { return last_resampled_; }
    double current_ess() const { return ess(std::span<const double>(log_weights_)); }

    const std::vector<typename Model::State>& particles() const { return particles_; }
    const std::vector<double>& log_weights() const { return log_weights_; }
    const std::vector<std::vector<hsmm::LatentState>>& trajectories() const {
        return trajectories_;
    }
    const std::vector<double>& path_log_weights() const { return path_log_weights_; }

    /// Advance to the next observation (t=1 initialises).
    void step() {
        const int M = cfg_.particles;
        const int t = t_ + 1;
        last_resampled_ = false;
        if (t > model_->horizon()) throw ValidationError("filter stepped past the data horizon");

        if (t == 1) {
            particles_.resize(static_cast<std::size_t>(M));
            log_weights_.assign(static_cast<std::size_t>(M), -std::log(static_cast<double>(M)));
            trajectories_.assign(static_cast<std::size_t>(M), {});
            path_log_weights_.assign(static_cast<std::size_t>(M), 0.0);
            parallel_for(static_cast<std::size_t>(M), cfg_.threads, [&](std::size_t m) {
                if (conditional() && m == 0) {
                    particles_[m] = model_->initial_given(reference_[0]);
                } else {
                    auto rng = slot_stream(t, static_cast<int>(m));
                    particles_[m] = model_->initial(rng);
                }
            });
        } else {
            maybe_resample(t);
            parallel_for(static_cast<std::size_t>(M), cfg_.threads, [&](std::size_t m) {
                if (conditional() && m == 0) {
                    particles_[m] = model_->step_given(particles_[m], t - 1,
                                                       reference_[static_cast<std::size_t>(t - 1)]);
                } else {
                    auto rng = slot_stream(t, static_cast<int>(m));
                    particles_[m] = model_->step(particles_[m], t - 1, rng);
                }
            });
        }

        std::vector<double> log_g(static_cast<std::size_t>(M));
        parallel_for(static_cast<std::size_t>(M), cfg_.threads, [&](std::size_t m) {
            log_g[m] = model_->log_obs(t, particles_[m]);
        });
        if (conditional() && pin_override_) log_g[0] = *pin_override_;

        // predictive increment and weight update (sequential reductions)
        std::vector<double> joint(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) joint[static_cast<std::size_t>(m)] = log_weights_[m] + log_g[m];
        const double lse = log_sum_exp(std::span<const double>(joint));
        if (!std::isfinite(lse)) {
            throw DegeneracyError("all particle weights vanished", t);
        }
        last_increment_ = lse;
        log_lik_ += lse;
        for (int m = 0; m < M; ++m) {
            log_weights_[m] = joint[static_cast<std::size_t>(m)] - lse;
            path_log_weights_[m] += log_g[static_cast<std::size_t>(m)];
            trajectories_[m].push_back(model_->latent(particles_[m]));
        }
        t_ = t;
    }

    void run_to(int t_end) {
        while (t_ < t_end) step();
    }

    /// Draw a full trajectory by ancestral tracing, proportional to the
    /// terminal weights.
    std::vector<hsmm::LatentState> sample_trajectory(RngStream& rng) const {
        return trajectories_[static_cast<std::size_t>(sample_index(rng))];
    }

    int sample_index(RngStream& rng) const {
        std::vector<double> w(log_weights_.size());
        for (std::size_t m = 0; m < w.size(); ++m) w[m] = std::exp(log_weights_[m]);
        return rng.categorical(w);
    }

    ParticleCloud<Model> cloud() const {
        ParticleCloud<Model> c;
        c.particles = particles_;
        c.log_weights = log_weights_;
        c.trajectories = trajectories_;
        c.log_likelihood = log_lik_;
        return c;
    }

    /// Checkpoint support: restore a filter mid-run. The key must match the
    /// one used originally for the continuation to be bit-identical.
    void restore(int t, double log_lik, std::vector<typename Model::State> particles,
                 std::vector<double> log_weights,
                 std::vector<std::vector<hsmm::LatentState>> trajectories) {
        t_ = t;
        log_lik_ = log_lik;
        particles_ = std::move(particles);
        log_weights_ = std::move(log_weights);
        trajectories_ = std::move(trajectories);
        path_log_weights_.assign(particles_.size(), 0.0);
    }

private:
    RngStream slot_stream(int t, int m) const {
        return key_.fold(static_cast<std::uint64_t>(t)).fold(static_cast<std::uint64_t>(m)).stream();
    }

    void maybe_resample(int t) {
        const int M = cfg_.particles;
        if (M < 2) return;
        if (current_ess() >= cfg_.resample_threshold * M) return;

        std::vector<double> w(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) w[static_cast<std::size_t>(m)] = std::exp(log_weights_[m]);
        auto rng = key_.fold(static_cast<std::uint64_t>(t)).fold(1u << 20).stream();
        std::vector<int> anc =
            cfg_.resampler == Resampler::systematic
                ? systematic_resample(std::span<const double>(w), M, rng)
                : multinomial_resample(std::span<const double>(w), M, rng);
        if (conditional()) {
            anc[0] = 0;
            if (cfg_.ancestor_sampling) anc[0] = sample_pin_ancestor(t, rng);
        }

        std::vector<typename Model::State> np(static_cast<std::size_t>(M));
        std::vector<std::vector<hsmm::LatentState>> nt(static_cast<std::size_t>(M));
        std::vector<double> npw(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) {
            const auto a = static_cast<std::size_t>(anc[static_cast<std::size_t>(m)]);
            np[static_cast<std::size_t>(m)] = particles_[a];
            nt[static_cast<std::size_t>(m)] = trajectories_[a];
            npw[static_cast<std::size_t>(m)] = path_log_weights_[a];
        }
        particles_ = std::move(np);
        trajectories_ = std::move(nt);
        path_log_weights_ = std::move(npw);
        log_weights_.assign(static_cast<std::size_t>(M), -std::log(static_cast<double>(M)));
        last_resampled_ = true;
    }

    /// Ancestor sampling for the pinned slot: weight each particle by its
    /// transition density into the upcoming reference point.
    int sample_pin_ancestor(int t, RngStream& rng) const {
        const int M = cfg_.particles;
        std::vector<double> lw(static_cast<std::size_t>(M));
        const auto& z_ref = reference_[static_cast<std::size_t>(t - 1)];
        for (int m = 0; m < M; ++m) {
            lw[static_cast<std::size_t>(m)] =
                log_weights_[m] + model_->log_latent_transition(z_ref, model_->latent(particles_[m]));
        }
        const double lse = log_sum_exp(std::span<const double>(lw));
        if (!std::isfinite(lse)) return 0;
        std::vector<double> w(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) w[static_cast<std::size_t>(m)] = std::exp(lw[m] - lse);
        return rng.categorical(w);
    }

    const Model* model_;
    FilterConfig cfg_;
    RngKey key_;
    std::vector<hsmm::LatentState> reference_;
    std::optional<double> pin_override_;

    int t_ = 0;
    double log_lik_ = 0.0;
    double last_increment_ = 0.0;
    bool last_resampled_ = false;
    std::vector<typename Model::State> particles_;
    std::vector<double> log_weights_;
    std::vector<std::vector<hsmm::LatentState>> trajectories_;
    std::vector<double> path_log_weights_;
};

template <typename Model>
struct FilterRun {
    ParticleCloud<Model> cloud;
    double log_likelihood = 0.0;
    std::vector<double> step_log_lik;
    std::vector<double> ess_trace;
    std::vector<char> resampled;
};

/// Bootstrap filter over the full horizon.
template <typename Model>
FilterRun<Model> pf_run(const Model& model, const FilterConfig& cfg, RngKey key) {
    Filter<Model> f(model, cfg, key);
    FilterRun<Model> out;
    const int T = model.horizon();
    out.step_log_lik.reserve(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        f.step();
        out.step_log_lik.push_back(f.last_increment());
        out.ess_trace.push_back(f.current_ess());
        out.resampled.push_back(f.last_resampled() ? 1 : 0);
    }
    out.cloud = f.cloud();
    out.log_likelihood = f.log_likelihood();
    return out;
}

template <typename Model>
struct ConditionalRun {
    std::vector<hsmm::LatentState> trajectory;
    ParticleCloud<Model> cloud;
    double log_likelihood = 0.0;
};

/// Conditional particle filter: runs the filter with slot 0 pinned to the
/// reference and draws the output trajectory by ancestral tracing. Leaves
/// the smoothing distribution invariant.
template <typename Model>
ConditionalRun<Model> conditional_pf(const Model& model, std::vector<hsmm::LatentState> reference,
                                     const FilterConfig& cfg, RngKey key,
                                     std::optional<double> pin_log_weight_override = std::nullopt) {
    Filter<Model> f(model, cfg, key, std::move(reference), pin_log_weight_override);
    const int T = model.horizon();
    for (int t = 1; t <= T; ++t) f.step();
    ConditionalRun<Model> out;
    auto rng = key.fold(0xC0FFEE).stream();
    out.trajectory = f.sample_trajectory(rng);
    out.cloud = f.cloud();
    out.log_likelihood = f.log_likelihood();
    return out;
}

// Concrete instantiations for the epidemic model.
using EpidemicCloud = ParticleCloud<EpidemicStateSpace>;
using EpidemicFilterRun = FilterRun<EpidemicStateSpace>;

EpidemicFilterRun pf_run(const EpidemicStateSpace& model, const FilterConfig& cfg, RngKey key);
ConditionalRun<EpidemicStateSpace> conditional_pf(const EpidemicStateSpace& model,
                                                  std::vector<hsmm::LatentState> reference,
                                                  const FilterConfig& cfg, RngKey key);

}  // namespace epiregime::filters
