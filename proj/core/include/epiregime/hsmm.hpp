#pragma once

#include <Eigen/Dense>
#include <vector>

#include "epiregime/params.hpp"
#include "epiregime/util/rng.hpp"

namespace epiregime::hsmm {

/// Semi-Markov pair state: regime index and remaining duration in days.
/// Regimes 0..K-1 are recurring; K is the non-recurring initial regime,
/// never re-entered once left. A visit with remaining duration d lasts
/// d+1 days in total (the entry day plus d further days).
struct LatentState {
    int s = 0;
    int d = 0;

    bool operator==(const LatentState&) const = default;
};

/// Per-regime categorical successor distributions at renewal, derived from
/// theta. Adjacent-move structure over the recurring regimes: regime i moves
/// up to i+1 with probability p[i], otherwise down to i-1 (regime 0 falls
/// back onto itself with a fresh duration); the top regime always moves
/// down. The initial regime K scatters over a configured destination set.
struct TransitionStructure {
    Eigen::MatrixXd rows;         ///< (K+1) x (K+1), each row sums to 1
    std::vector<int> destinations;

    int n_regimes() const { return static_cast<int>(rows.rows()) - 1; }

    static TransitionStructure build(const ThetaParams& theta, const FixedConfig& cfg);
};

/// Negative Binomial duration log-pmf on {0, 1, 2, ...}:
/// mean r_s (1 - psi_s) / psi_s.
double duration_logpmf(int d, int regime, const ThetaParams& theta);

/// Sample a duration by pmf inversion (deterministic given the stream).
int duration_sample(int regime, const ThetaParams& theta, RngStream& rng);

/// d/dr and d/dpsi of duration_logpmf at (d, regime).
void duration_logpmf_grad(int d, int regime, const ThetaParams& theta, double& d_r, double& d_psi);

/// One-step latent transition. Deterministic decrement while d > 0; regime
/// renewal plus fresh duration draw at d == 0.
LatentState step_latent(const LatentState& z_prev, const ThetaParams& theta,
                        const TransitionStructure& ts, RngStream& rng);
LatentState step_latent(const LatentState& z_prev, const ThetaParams& theta,
                        const FixedConfig& cfg, RngStream& rng);

/// Exact log of the one-step kernel p(z_new | z_prev).
double log_transition(const LatentState& z_new, const LatentState& z_prev,
                      const ThetaParams& theta, const TransitionStructure& ts);
double log_transition(const LatentState& z_new, const LatentState& z_prev,
                      const ThetaParams& theta, const FixedConfig& cfg);

/// Draw from the initial density: the non-recurring regime with a fresh
/// duration.
LatentState initial_latent(const ThetaParams& theta, const FixedConfig& cfg, RngStream& rng);

/// Log density of z_1 under the initial distribution.
double log_initial(const LatentState& z, const ThetaParams& theta, const FixedConfig& cfg);

/// Structural feasibility of a trajectory (decrement consistency and
/// reachable renewals); independent of theta values.
bool is_feasible(const std::vector<LatentState>& traj, const FixedConfig& cfg);

/// Log density of a full latent path z_{1:T} (initial + transitions).
double path_log_density(const std::vector<LatentState>& traj, const ThetaParams& theta,
                        const FixedConfig& cfg);

/// Gradient of path_log_density with respect to (p, p_init, r, psi);
/// other blocks are untouched.
void accumulate_path_gradient(const std::vector<LatentState>& traj, const ThetaParams& theta,
                              const FixedConfig& cfg, ThetaGradient& grad);

}  // namespace epiregime::hsmm
