#pragma once

#include <optional>
#include <vector>

#include "epiregime/dynamics.hpp"
#include "epiregime/params.hpp"
#include "epiregime/util/rng.hpp"

namespace epiregime::observation {

/// Reported data point at day t (1-based). Either channel may be missing.
struct Observation {
    std::optional<long> cases;
    std::optional<long> deaths;
    int t = 0;

    bool empty() const { return !cases && !deaths; }
};

using ObservationSeries = std::vector<Observation>;

enum class ObsModelKind { deaths_only, cases_and_deaths };

/// Log pmf of the Negative Binomial parameterised by mean and variance
/// (size = mu^2 / (variance - mu), success probability mu / variance).
/// Throws std::domain_error unless variance > mu > 0.
double nb_alt_logpmf(long y, double mu, double variance);

/// Mean/overdispersion form: variance = mu + mu^2 / phi.
double nb_alt_logpmf_mu_phi(long y, double mu, double phi);

/// Partial derivatives of nb_alt_logpmf_mu_phi with respect to mu and phi.
void nb_alt_grad_mu_phi(long y, double mu, double phi, double& d_mu, double& d_phi);

/// Gamma-Poisson mixture draw; mu == 0 yields 0.
long nb_alt_sample(double mu, double phi, RngStream& rng);

/// Observation log density of e_t given the augmented state at t. Missing
/// channels contribute zero; a positive count against a zero model-implied
/// mean yields -inf rather than an exception.
double log_obs(const Observation& obs, const dynamics::AugmentedState& x,
               const ThetaParams& theta, const dynamics::Schedules& sched, ObsModelKind kind);

/// Channel means used by log_obs, exposed for the likelihood gradient and
/// the predictive estimators.
void obs_means(const dynamics::AugmentedState& x, const dynamics::Schedules& sched, int t,
               double& mu_cases, double& mu_deaths);

/// log_obs evaluated from precomputed channel means.
double log_obs_from_means(const Observation& obs, double mu_cases, double mu_deaths,
                          const ThetaParams& theta, ObsModelKind kind);

}  // namespace epiregime::observation
