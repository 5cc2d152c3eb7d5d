#pragma once

#include <Eigen/Dense>
#include <vector>

#include "epiregime/hsmm.hpp"
#include "epiregime/params.hpp"
#include "epiregime/util/rng.hpp"

namespace epiregime::dynamics {

/// SEEIIR compartment vector (persons).
struct OdeState {
    double S = 0.0, E1 = 0.0, E2 = 0.0, I1 = 0.0, I2 = 0.0, R = 0.0;

    double sum() const { return S + E1 + E2 + I1 + I2 + R; }
};

/// Exogenous daily schedules. nu is zero outside its recorded range on the
/// left and held at the last value on the right (forecast extrapolation);
/// ifr and ur are clamped to their recorded range.
struct Schedules {
    std::vector<double> nu;       ///< daily first vaccinations
    std::vector<double> ifr;      ///< infection-fatality ratio per day
    std::vector<double> ur;       ///< under-reporting score per day, in (0,1]
    std::vector<double> f_delay;  ///< infection-to-death delay pmf by lag; [0] unused (= 0)

    double nu_at(int t) const {
        if (t < 0 || nu.empty()) return 0.0;
        if (t >= static_cast<int>(nu.size())) return nu.back();
        return nu[static_cast<std::size_t>(t)];
    }
    double ifr_at(int t) const { return clamped(ifr, t, 0.0); }
    double ur_at(int t) const { return clamped(ur, t, 1.0); }

    void validate(const FixedConfig& cfg) const;

    /// Constant schedules used by synthetic-data experiments.
    static Schedules synthetic_defaults(const FixedConfig& cfg, int horizon);

private:
    static double clamped(const std::vector<double>& xs, int t, double fallback) {
        if (xs.empty()) return fallback;
        if (t < 0) return xs.front();
        if (t >= static_cast<int>(xs.size())) return xs.back();
        return xs[static_cast<std::size_t>(t)];
    }
};

/// Markov-restoring augmented state: ODE compartments, semi-Markov pair, and
/// the incidence window of the last `window` days (most recent last).
struct AugmentedState {
    OdeState ode;
    hsmm::LatentState z;
    std::vector<double> hist;

    double latest_incidence() const { return hist.empty() ? 0.0 : hist.back(); }
};

struct StepResult {
    OdeState state;
    double incidence = 0.0;  ///< new infections accumulated over the day
    int clamped = 0;         ///< substeps that needed the nonnegativity guard
};

/// Advance the compartments one day with classical RK4 (cfg.dt_substeps equal
/// substeps). The day's new infections are accumulated as an extra quadrature
/// component integrated by the same RK4 stages. Throws NumericalError if the
/// state leaves the finite range.
StepResult ode_step(const OdeState& state, double beta, const ThetaParams& theta,
                    const FixedConfig& cfg, double nu_lagged);

/// Sensitivity-carrying variant. `sens` holds d(state, cum_incidence)/dq as a
/// 7 x P matrix with parameter order (log_beta_0..log_beta_{K-1}, gamma1,
/// gamma2, epsilon); `active_beta` names the log_beta column driving this
/// day's transmission. Both state and sensitivities advance jointly, so the
/// result is the exact derivative of the discrete RK4 map.
StepResult ode_step_with_sens(const OdeState& state, Eigen::MatrixXd& sens, int active_beta,
                              double beta, const ThetaParams& theta, const FixedConfig& cfg,
                              double nu_lagged, Eigen::VectorXd& d_incidence);

OdeState initial_ode_state(const FixedConfig& cfg);

/// Model-implied deaths at the day owning `hist`: the delayed convolution of
/// past incidence (lags 1..window-1; the window's most recent entry is the
/// current day and does not contribute).
double implied_deaths(const std::vector<double>& hist, double ifr_t,
                      const std::vector<double>& f_delay);

/// beta * (1/gamma1 + 1/gamma2) * S / N.
double reproduction_number(const OdeState& state, double beta, const ThetaParams& theta,
                           const FixedConfig& cfg);

/// Day-1 state: draws z_1 from the initial density and advances the
/// configured compartments through the first day.
AugmentedState initial_augmented(const ThetaParams& theta, const hsmm::TransitionStructure& ts,
                                 const FixedConfig& cfg, const Schedules& sched, RngStream& rng);

/// Deterministic day-1 state for a pinned latent value.
AugmentedState initial_augmented_given(const hsmm::LatentState& z1, const ThetaParams& theta,
                                       const FixedConfig& cfg, const Schedules& sched);

/// One-day augmented transition x_{t_prev} -> x_{t_prev + 1}: samples the
/// latent pair, solves the ODE under the implied transmission rate, and
/// shifts the incidence window.
AugmentedState advance(const AugmentedState& x, const ThetaParams& theta,
                       const hsmm::TransitionStructure& ts, const FixedConfig& cfg,
                       const Schedules& sched, int t_prev, RngStream& rng);

/// advance() with the latent pair pinned (conditional filter / replay paths).
AugmentedState advance_given(const AugmentedState& x, const hsmm::LatentState& z_next,
                             const ThetaParams& theta, const FixedConfig& cfg,
                             const Schedules& sched, int t_prev);

/// Deterministic rollout of the full day-by-day path implied by a latent
/// trajectory, with optional exact sensitivities of incidence and deaths
/// with respect to the ODE parameter block.
struct PathEval {
    std::vector<OdeState> states;   ///< index t-1 holds the state at day t
    std::vector<double> incidence;  ///< model-implied cases c^i_t
    std::vector<double> deaths;     ///< model-implied deaths d^i_t
    Eigen::MatrixXd d_incidence;    ///< T x (K+3), empty unless requested
    Eigen::MatrixXd d_deaths;
    int clamp_count = 0;
};

PathEval eval_path(const std::vector<hsmm::LatentState>& trajectory, const ThetaParams& theta,
                   const FixedConfig& cfg, const Schedules& sched, bool with_sensitivities);

}  // namespace epiregime::dynamics
