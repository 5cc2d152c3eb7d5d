#include "epiregime/hsmm.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>

#include "epiregime/util/errors.hpp"
#include "epiregime/util/math.hpp"

namespace epiregime::hsmm {

TransitionStructure TransitionStructure::build(const ThetaParams& theta, const FixedConfig& cfg) {
    const int K = cfg.n_regimes;
    TransitionStructure ts;
    ts.destinations = cfg.destinations();
    ts.rows = Eigen::MatrixXd::Zero(K + 1, K + 1);

    for (int i = 0; i < K; ++i) {
        if (i == K - 1) {
            // top regime: single downward move (or self for K == 1)
            ts.rows(i, std::max(i - 1, 0)) = 1.0;
        } else {
            ts.rows(i, i + 1) = theta.p(i);
            ts.rows(i, std::max(i - 1, 0)) += 1.0 - theta.p(i);  // regime 0 re-enters itself
        }
    }
    for (std::size_t j = 0; j < ts.destinations.size(); ++j) {
        ts.rows(K, ts.destinations[j]) += theta.p_init(static_cast<int>(j));
    }
    return ts;
}

double duration_logpmf(int d, int regime, const ThetaParams& theta) {
    if (d < 0) return neg_inf;
    const double r = theta.r(regime);
    const double psi = theta.psi(regime);
    return std::lgamma(d + r) - std::lgamma(r) - std::lgamma(d + 1.0) + r * std::log(psi) +
           d * std::log1p(-psi);
}

int duration_sample(int regime, const ThetaParams& theta, RngStream& rng) {
    const double r = theta.r(regime);
    const double psi = theta.psi(regime);
    const double u = rng.uniform();
    // pmf recurrence: f(d+1) = f(d) (d + r) / (d + 1) (1 - psi)
    double f = std::exp(r * std::log(psi));
    double cum = f;
    int d = 0;
    constexpr int d_cap = 1000000;
    while (u >= cum && d < d_cap) {
        f *= (d + r) / (d + 1.0) * (1.0 - psi);
        cum += f;
        ++d;
    }
    return d;
}

void duration_logpmf_grad(int d, int regime, const ThetaParams& theta, double& d_r,
                          double& d_psi) {
    const double r = theta.r(regime);
    const double psi = theta.psi(regime);
    d_r = boost::math::digamma(d + r) - boost::math::digamma(r) + std::log(psi);
    d_psi = r / psi - d / (1.0 - psi);
}

LatentState step_latent(const LatentState& z_prev, const ThetaParams& theta,
                        const TransitionStructure& ts, RngStream& rng) {
    if (z_prev.d > 0) return {z_prev.s, z_prev.d - 1};
    const int K = ts.n_regimes();
    const Eigen::VectorXd row = ts.rows.row(z_prev.s);
    const double u = rng.uniform();
    int s_new = 0;
    double cum = 0.0;
    for (int s = 0; s <= K; ++s) {
        cum += row(s);
        if (u < cum) {
            s_new = s;
            break;
        }
        if (s == K) s_new = K;
    }
    return {s_new, duration_sample(s_new, theta, rng)};
}

LatentState step_latent(const LatentState& z_prev, const ThetaParams& theta,
                        const FixedConfig& cfg, RngStream& rng) {
    return step_latent(z_prev, theta, TransitionStructure::build(theta, cfg), rng);
}

double log_transition(const LatentState& z_new, const LatentState& z_prev,
                      const ThetaParams& theta, const TransitionStructure& ts) {
    if (z_prev.d > 0) {
        return (z_new.s == z_prev.s && z_new.d == z_prev.d - 1) ? 0.0 : neg_inf;
    }
    if (z_new.d < 0) return neg_inf;
    const double f = ts.rows(z_prev.s, z_new.s);
    if (f <= 0.0) return neg_inf;
    return std::log(f) + duration_logpmf(z_new.d, z_new.s, theta);
}

double log_transition(const LatentState& z_new, const LatentState& z_prev,
                      const ThetaParams& theta, const FixedConfig& cfg) {
    return log_transition(z_new, z_prev, theta, TransitionStructure::build(theta, cfg));
}

LatentState initial_latent(const ThetaParams& theta, const FixedConfig& cfg, RngStream& rng) {
    const int K = cfg.initial_regime();
    return {K, duration_sample(K, theta, rng)};
}

double log_initial(const LatentState& z, const ThetaParams& theta, const FixedConfig& cfg) {
    if (z.s != cfg.initial_regime() || z.d < 0) return neg_inf;
    return duration_logpmf(z.d, z.s, theta);
}

bool is_feasible(const std::vector<LatentState>& traj, const FixedConfig& cfg) {
    if (traj.empty()) return false;
    const int K = cfg.n_regimes;
    const auto dest = cfg.destinations();
    if (traj[0].s != cfg.initial_regime() || traj[0].d < 0) return false;
    for (std::size_t t = 1; t < traj.size(); ++t) {
        const auto& prev = traj[t - 1];
        const auto& cur = traj[t];
        if (cur.d < 0 || cur.s < 0 || cur.s > K) return false;
        if (prev.d > 0) {
            if (cur.s != prev.s || cur.d != prev.d - 1) return false;
        } else {
            if (cur.s == cfg.initial_regime()) return false;  // never re-entered
            if (prev.s == cfg.initial_regime()) {
                bool ok = false;
                for (int d : dest) ok |= (cur.s == d);
                if (!ok) return false;
            } else if (prev.s == K - 1 && K > 1) {
                if (cur.s != K - 2) return false;
            } else if (prev.s == 0) {
                if (cur.s != 0 && cur.s != std::min(1, K - 1)) return false;
            } else {
                if (cur.s != prev.s - 1 && cur.s != prev.s + 1) return false;
            }
        }
    }
    return true;
}

double path_log_density(const std::vector<LatentState>& traj, const ThetaParams& theta,
                        const FixedConfig& cfg) {
    if (traj.empty()) return neg_inf;
    const TransitionStructure ts = TransitionStructure::build(theta, cfg);
    double lp = log_initial(traj[0], theta, cfg);
    for (std::size_t t = 1; t < traj.size() && std::isfinite(lp); ++t) {
        lp += log_transition(traj[t], traj[t - 1], theta, ts);
    }
    return std::isfinite(lp) ? lp : neg_inf;
}

void accumulate_path_gradient(const std::vector<LatentState>& traj, const ThetaParams& theta,
                              const FixedConfig& cfg, ThetaGradient& grad) {
    const int K = cfg.n_regimes;
    const auto dest = cfg.destinations();

    auto add_duration = [&](int regime, int d) {
        double d_r = 0.0, d_psi = 0.0;
        duration_logpmf_grad(d, regime, theta, d_r, d_psi);
        grad.r(regime) += d_r;
        grad.psi(regime) += d_psi;
    };

    add_duration(traj[0].s, traj[0].d);
    for (std::size_t t = 1; t < traj.size(); ++t) {
        const auto& prev = traj[t - 1];
        const auto& cur = traj[t];
        if (prev.d > 0) continue;  // deterministic decrement, no parameter
        add_duration(cur.s, cur.d);
        if (prev.s == cfg.initial_regime()) {
            for (std::size_t j = 0; j < dest.size(); ++j) {
                if (dest[j] == cur.s) grad.p_init(static_cast<int>(j)) += 1.0 / theta.p_init(j);
            }
        } else if (prev.s < K - 1) {
            if (cur.s == prev.s + 1) {
                grad.p(prev.s) += 1.0 / theta.p(prev.s);
            } else {
                grad.p(prev.s) -= 1.0 / (1.0 - theta.p(prev.s));
            }
        }
        // top regime's move carries probability 1
    }
}

}  // namespace epiregime::hsmm
