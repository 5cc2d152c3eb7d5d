#include "epiregime/observation.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <stdexcept>

#include "epiregime/util/math.hpp"

namespace epiregime::observation {

double nb_alt_logpmf(long y, double mu, double variance) {
    if (!(mu > 0.0)) throw std::domain_error("nb_alt_logpmf: mu must be positive");
    if (!(variance > mu)) throw std::domain_error("nb_alt_logpmf: variance must exceed mu");
    if (y < 0) return neg_inf;
    const double size = mu * mu / (variance - mu);
    const double prob = mu / variance;  // success probability of the standard form
    const double yd = static_cast<double>(y);
    return std::lgamma(yd + size) - std::lgamma(size) - std::lgamma(yd + 1.0) +
           size * std::log(prob) + yd * std::log1p(-prob);
}

double nb_alt_logpmf_mu_phi(long y, double mu, double phi) {
    return nb_alt_logpmf(y, mu, mu + mu * mu / phi);
}

void nb_alt_grad_mu_phi(long y, double mu, double phi, double& d_mu, double& d_phi) {
    const double yd = static_cast<double>(y);
    d_mu = yd / mu - (yd + phi) / (phi + mu);
    d_phi = boost::math::digamma(yd + phi) - boost::math::digamma(phi) +
            std::log(phi / (phi + mu)) + 1.0 - (yd + phi) / (phi + mu);
}

long nb_alt_sample(double mu, double phi, RngStream& rng) {
    if (!(mu > 0.0)) return 0;
    const double lambda = rng.gamma(phi, mu / phi);
    return rng.poisson(lambda);
}

void obs_means(const dynamics::AugmentedState& x, const dynamics::Schedules& sched, int t,
               double& mu_cases, double& mu_deaths) {
    mu_cases = x.latest_incidence() * sched.ur_at(t);
    mu_deaths = dynamics::implied_deaths(x.hist, sched.ifr_at(t), sched.f_delay);
}

double log_obs_from_means(const Observation& obs, double mu_cases, double mu_deaths,
                          const ThetaParams& theta, ObsModelKind kind) {
    double lp = 0.0;
    if (obs.cases && kind == ObsModelKind::cases_and_deaths) {
        if (mu_cases > 0.0) {
            lp += nb_alt_logpmf_mu_phi(*obs.cases, mu_cases, theta.phi_cases);
        } else if (*obs.cases > 0) {
            return neg_inf;
        }
    }
    if (obs.deaths) {
        if (mu_deaths > 0.0) {
            lp += nb_alt_logpmf_mu_phi(*obs.deaths, mu_deaths, theta.phi_deaths);
        } else if (*obs.deaths > 0) {
            return neg_inf;
        }
    }
    return lp;
}

double log_obs(const Observation& obs, const dynamics::AugmentedState& x,
               const ThetaParams& theta, const dynamics::Schedules& sched, ObsModelKind kind) {
    double mu_cases = 0.0, mu_deaths = 0.0;
    obs_means(x, sched, obs.t, mu_cases, mu_deaths);
    return log_obs_from_means(obs, mu_cases, mu_deaths, theta, kind);
}

}  // namespace epiregime::observation
