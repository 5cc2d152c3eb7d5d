#pragma once

#include "epiregime/dynamics.hpp"
#include "epiregime/hsmm.hpp"
#include "epiregime/observation.hpp"
#include "epiregime/params.hpp"

namespace epiregime {

/// The epidemic state-space model bound to one parameter value. Satisfies the
/// Model interface the particle engines expect:
///
///   using State = ...;
///   int horizon();
///   State initial(RngStream&) / initial_given(LatentState);
///   State step(State, t_prev, RngStream&) / step_given(State, t_prev, LatentState);
///   latent(State), log_obs(t, State),
///   log_latent_initial(z), log_latent_transition(z_new, z_prev).
///
/// All methods are const and the object is safe to share across particle
/// threads; callers own the random streams.
class EpidemicStateSpace {
public:
    using State = dynamics::AugmentedState;

    EpidemicStateSpace(ThetaParams theta, const FixedConfig& cfg,
                       const dynamics::Schedules& sched,
                       const observation::ObservationSeries& obs,
                       observation::ObsModelKind kind)
        : theta_(std::move(theta)),
          ts_(hsmm::TransitionStructure::build(theta_, cfg)),
          cfg_(&cfg),
          sched_(&sched),
          obs_(&obs),
          kind_(kind) {}

    int horizon() const { return static_cast<int>(obs_->size()); }

    State initial(RngStream& rng) const {
        return dynamics::initial_augmented(theta_, ts_, *cfg_, *sched_, rng);
    }
    State initial_given(const hsmm::LatentState& z1) const {
        return dynamics::initial_augmented_given(z1, theta_, *cfg_, *sched_);
    }
    State step(const State& x, int t_prev, RngStream& rng) const {
        return dynamics::advance(x, theta_, ts_, *cfg_, *sched_, t_prev, rng);
    }
    State step_given(const State& x, int t_prev, const hsmm::LatentState& z_next) const {
        return dynamics::advance_given(x, z_next, theta_, *cfg_, *sched_, t_prev);
    }

    const hsmm::LatentState& latent(const State& x) const { return x.z; }

    double log_obs(int t, const State& x) const {
        return observation::log_obs((*obs_)[static_cast<std::size_t>(t - 1)], x, theta_, *sched_,
                                    kind_);
    }

    double log_latent_initial(const hsmm::LatentState& z) const {
        return hsmm::log_initial(z, theta_, *cfg_);
    }
    double log_latent_transition(const hsmm::LatentState& z_new,
                                 const hsmm::LatentState& z_prev) const {
        return hsmm::log_transition(z_new, z_prev, theta_, ts_);
    }

    const ThetaParams& theta() const { return theta_; }
    const FixedConfig& config() const { return *cfg_; }
    const dynamics::Schedules& schedules() const { return *sched_; }
    const observation::ObservationSeries& observations() const { return *obs_; }
    observation::ObsModelKind kind() const { return kind_; }

private:
    ThetaParams theta_;
    hsmm::TransitionStructure ts_;
    const FixedConfig* cfg_;
    const dynamics::Schedules* sched_;
    const observation::ObservationSeries* obs_;
    observation::ObsModelKind kind_;
};

}  // namespace epiregime
