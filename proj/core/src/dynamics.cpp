#include "epiregime/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "epiregime/util/errors.hpp"
#include "epiregime/util/math.hpp"

namespace epiregime::dynamics {

namespace {

using Vec7 = Eigen::Matrix<double, 7, 1>;

// y = (S, E1, E2, I1, I2, R, C) where C accumulates new infections.
Vec7 rhs(const Vec7& y, double beta, double g1, double g2, double eps, double n_pop,
         double vacc_rate) {
    const double lam = beta * (y(3) + y(4)) / n_pop;
    const double flow = lam * y(0);
    Vec7 f;
    f(0) = -flow - vacc_rate;
    f(1) = flow - eps * y(1);
    f(2) = eps * (y(1) - y(2));
    f(3) = eps * y(2) - g1 * y(3);
    f(4) = g1 * y(3) - g2 * y(4);
    f(5) = g2 * y(4) + vacc_rate;
    f(6) = flow;
    return f;
}

// Jacobian-vector product d(rhs)/dy * s plus the parameter column. The
// cumulative-incidence component never feeds back into the dynamics.
void sens_rhs(const Vec7& y, const Eigen::MatrixXd& sens, double beta, double g1, double g2,
              double eps, double n_pop, int active_beta, int K, Eigen::MatrixXd& out) {
    const double lam = beta * (y(3) + y(4)) / n_pop;
    const double bsn = beta * y(0) / n_pop;
    const int P = static_cast<int>(sens.cols());
    for (int q = 0; q < P; ++q) {
        const double sS = sens(0, q), sE1 = sens(1, q), sE2 = sens(2, q), sI1 = sens(3, q),
                     sI2 = sens(4, q);
        const double d_flow = lam * sS + bsn * (sI1 + sI2);
        out(0, q) = -d_flow;
        out(1, q) = d_flow - eps * sE1;
        out(2, q) = eps * (sE1 - sE2);
        out(3, q) = eps * sE2 - g1 * sI1;
        out(4, q) = g1 * sI1 - g2 * sI2;
        out(5, q) = g2 * sI2;
        out(6, q) = d_flow;
    }
    // direct parameter derivatives
    if (active_beta >= 0) {
        const double flow = lam * y(0);  // d flow / d log beta
        out(0, active_beta) += -flow;
        out(1, active_beta) += flow;
        out(6, active_beta) += flow;
    }
    out(3, K) += -y(3);
    out(4, K) += y(3);
    out(4, K + 1) += -y(4);
    out(5, K + 1) += y(4);
    out(1, K + 2) += -y(1);
    out(2, K + 2) += y(1) - y(2);
    out(3, K + 2) += y(2);
}

Vec7 pack(const OdeState& o) {
    Vec7 y;
    y << o.S, o.E1, o.E2, o.I1, o.I2, o.R, 0.0;
    return y;
}

OdeState unpack(const Vec7& y) { return {y(0), y(1), y(2), y(3), y(4), y(5)}; }

// Nonnegativity guard: clamp then rescale the six compartments back to the
// conserved total. Returns true if the guard fired.
bool guard_nonnegative(Vec7& y, double n_pop) {
    bool fired = false;
    for (int i = 0; i < 6; ++i) {
        if (y(i) < 0.0) {
            y(i) = 0.0;
            fired = true;
        }
    }
    if (fired) {
        const double total = y.head<6>().sum();
        if (!(total > 0.0)) throw NumericalError("all compartments clamped to zero");
        y.head<6>() *= n_pop / total;
    }
    return fired;
}

void check_finite(const Vec7& y, double beta) {
    for (int i = 0; i < 7; ++i) {
        if (!std::isfinite(y(i))) {
            std::ostringstream msg;
            msg << "non-finite compartment after ODE step (beta=" << beta << "): [" << y(0);
            for (int j = 1; j < 7; ++j) msg << ", " << y(j);
            msg << "]";
            throw NumericalError(msg.str());
        }
    }
}

}  // namespace

void Schedules::validate(const FixedConfig& cfg) const {
    if (static_cast<int>(f_delay.size()) != cfg.window)
        throw ValidationError("Schedules.f_delay must have `window` entries");
    double sum = 0.0;
    for (double f : f_delay) {
        if (f < 0.0) throw ValidationError("Schedules.f_delay entries must be >= 0");
        sum += f;
    }
    if (sum > 1.0 + 1e-9) throw ValidationError("Schedules.f_delay mass must not exceed 1");
    for (double x : ifr) {
        if (!(x > 0.0 && x < 1.0)) throw ValidationError("Schedules.ifr values must lie in (0,1)");
    }
    for (double x : ur) {
        if (!(x > 0.0 && x <= 1.0)) throw ValidationError("Schedules.ur values must lie in (0,1]");
    }
    for (double x : nu) {
        if (x < 0.0) throw ValidationError("Schedules.nu values must be >= 0");
    }
}

Schedules Schedules::synthetic_defaults(const FixedConfig& cfg, int horizon) {
    Schedules s;
    s.nu.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
    s.ifr.assign(static_cast<std::size_t>(horizon) + 1, 0.005);
    s.ur.assign(static_cast<std::size_t>(horizon) + 1, 1.0);
    // triangular delay profile peaking mid-window; tests and synthetic runs
    // override this with the discretised-Gamma default from data_io
    s.f_delay.assign(static_cast<std::size_t>(cfg.window), 0.0);
    double total = 0.0;
    for (int k = 1; k < cfg.window; ++k) {
        const double x = static_cast<double>(std::min(k, cfg.window - k));
        s.f_delay[static_cast<std::size_t>(k)] = x;
        total += x;
    }
    for (double& f : s.f_delay) f /= total;
    return s;
}

StepResult ode_step(const OdeState& state, double beta, const ThetaParams& theta,
                    const FixedConfig& cfg, double nu_lagged) {
    const double h = 1.0 / cfg.dt_substeps;
    const double vacc = cfg.rho * nu_lagged;
    Vec7 y = pack(state);
    int clamped = 0;
    for (int step = 0; step < cfg.dt_substeps; ++step) {
        const Vec7 k1 = rhs(y, beta, theta.gamma1, theta.gamma2, theta.epsilon, cfg.n_pop, vacc);
        const Vec7 k2 = rhs(y + 0.5 * h * k1, beta, theta.gamma1, theta.gamma2, theta.epsilon,
                            cfg.n_pop, vacc);
        const Vec7 k3 = rhs(y + 0.5 * h * k2, beta, theta.gamma1, theta.gamma2, theta.epsilon,
                            cfg.n_pop, vacc);
        const Vec7 k4 = rhs(y + h * k3, beta, theta.gamma1, theta.gamma2, theta.epsilon,
                            cfg.n_pop, vacc);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        clamped += guard_nonnegative(y, cfg.n_pop) ? 1 : 0;
    }
    check_finite(y, beta);
    return {unpack(y), y(6), clamped};
}

StepResult ode_step_with_sens(const OdeState& state, Eigen::MatrixXd& sens, int active_beta,
                              double beta, const ThetaParams& theta, const FixedConfig& cfg,
                              double nu_lagged, Eigen::VectorXd& d_incidence) {
    const int K = theta.n_regimes();
    const int P = K + 3;
    if (sens.rows() != 7 || sens.cols() != P) sens = Eigen::MatrixXd::Zero(7, P);
    const Eigen::RowVectorXd c_start = sens.row(6);

    const double h = 1.0 / cfg.dt_substeps;
    const double vacc = cfg.rho * nu_lagged;
    const double g1 = theta.gamma1, g2 = theta.gamma2, eps = theta.epsilon;
    Vec7 y = pack(state);
    Eigen::MatrixXd sk1(7, P), sk2(7, P), sk3(7, P), sk4(7, P), tmp(7, P);
    int clamped = 0;
    for (int step = 0; step < cfg.dt_substeps; ++step) {
        const Vec7 k1 = rhs(y, beta, g1, g2, eps, cfg.n_pop, vacc);
        sens_rhs(y, sens, beta, g1, g2, eps, cfg.n_pop, active_beta, K, sk1);

        const Vec7 y2 = y + 0.5 * h * k1;
        tmp = sens + 0.5 * h * sk1;
        const Vec7 k2 = rhs(y2, beta, g1, g2, eps, cfg.n_pop, vacc);
        sens_rhs(y2, tmp, beta, g1, g2, eps, cfg.n_pop, active_beta, K, sk2);

        const Vec7 y3 = y + 0.5 * h * k2;
        tmp = sens + 0.5 * h * sk2;
        const Vec7 k3 = rhs(y3, beta, g1, g2, eps, cfg.n_pop, vacc);
        sens_rhs(y3, tmp, beta, g1, g2, eps, cfg.n_pop, active_beta, K, sk3);

        const Vec7 y4 = y + h * k3;
        tmp = sens + h * sk3;
        const Vec7 k4 = rhs(y4, beta, g1, g2, eps, cfg.n_pop, vacc);
        sens_rhs(y4, tmp, beta, g1, g2, eps, cfg.n_pop, active_beta, K, sk4);

        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        sens += (h / 6.0) * (sk1 + 2.0 * sk2 + 2.0 * sk3 + sk4);
        clamped += guard_nonnegative(y, cfg.n_pop) ? 1 : 0;
    }
    check_finite(y, beta);
    d_incidence = (sens.row(6) - c_start).transpose();
    return {unpack(y), y(6), clamped};
}

OdeState initial_ode_state(const FixedConfig& cfg) {
    OdeState o;
    o.E1 = cfg.e0;
    o.S = cfg.n_pop - cfg.e0;
    return o;
}

double implied_deaths(const std::vector<double>& hist, double ifr_t,
                      const std::vector<double>& f_delay) {
    const int w = static_cast<int>(hist.size());
    double acc = 0.0;
    for (int k = 1; k < w && k < static_cast<int>(f_delay.size()); ++k) {
        acc += hist[static_cast<std::size_t>(w - 1 - k)] * f_delay[static_cast<std::size_t>(k)];
    }
    return ifr_t * acc;
}

double reproduction_number(const OdeState& state, double beta, const ThetaParams& theta,
                           const FixedConfig& cfg) {
    return beta * (1.0 / theta.gamma1 + 1.0 / theta.gamma2) * state.S / cfg.n_pop;
}

static void shift_append(std::vector<double>& hist, double value) {
    for (std::size_t i = 0; i + 1 < hist.size(); ++i) hist[i] = hist[i + 1];
    hist.back() = value;
}

AugmentedState initial_augmented_given(const hsmm::LatentState& z1, const ThetaParams& theta,
                                       const FixedConfig& cfg, const Schedules& sched) {
    AugmentedState x;
    x.z = z1;
    const double beta = std::exp(theta.log_beta_of(z1.s, cfg));
    const auto step = ode_step(initial_ode_state(cfg), beta, theta, cfg,
                               sched.nu_at(1 - cfg.vaccination_delay));
    x.ode = step.state;
    x.hist.assign(static_cast<std::size_t>(cfg.window), 0.0);
    shift_append(x.hist, step.incidence);
    return x;
}

AugmentedState initial_augmented(const ThetaParams& theta, const hsmm::TransitionStructure&,
                                 const FixedConfig& cfg, const Schedules& sched, RngStream& rng) {
    return initial_augmented_given(hsmm::initial_latent(theta, cfg, rng), theta, cfg, sched);
}

AugmentedState advance_given(const AugmentedState& x, const hsmm::LatentState& z_next,
                             const ThetaParams& theta, const FixedConfig& cfg,
                             const Schedules& sched, int t_prev) {
    AugmentedState next;
    next.z = z_next;
    const double beta = std::exp(theta.log_beta_of(z_next.s, cfg));
    const auto step =
        ode_step(x.ode, beta, theta, cfg, sched.nu_at(t_prev + 1 - cfg.vaccination_delay));
    next.ode = step.state;
    next.hist = x.hist;
    shift_append(next.hist, step.incidence);
    return next;
}

AugmentedState advance(const AugmentedState& x, const ThetaParams& theta,
                       const hsmm::TransitionStructure& ts, const FixedConfig& cfg,
                       const Schedules& sched, int t_prev, RngStream& rng) {
    return advance_given(x, hsmm::step_latent(x.z, theta, ts, rng), theta, cfg, sched, t_prev);
}

PathEval eval_path(const std::vector<hsmm::LatentState>& trajectory, const ThetaParams& theta,
                   const FixedConfig& cfg, const Schedules& sched, bool with_sensitivities) {
    const int T = static_cast<int>(trajectory.size());
    const int K = theta.n_regimes();
    const int P = K + 3;
    PathEval out;
    out.states.reserve(static_cast<std::size_t>(T));
    out.incidence.reserve(static_cast<std::size_t>(T));
    out.deaths.assign(static_cast<std::size_t>(T), 0.0);
    if (with_sensitivities) {
        out.d_incidence = Eigen::MatrixXd::Zero(T, P);
        out.d_deaths = Eigen::MatrixXd::Zero(T, P);
    }

    OdeState state = initial_ode_state(cfg);
    Eigen::MatrixXd sens = Eigen::MatrixXd::Zero(7, P);
    Eigen::VectorXd d_inc(P);
    for (int t = 1; t <= T; ++t) {
        const int s = trajectory[static_cast<std::size_t>(t - 1)].s;
        const int active = s == cfg.initial_regime() ? cfg.tie_index() : s;
        const double beta = std::exp(theta.log_beta(active));
        const double nu = sched.nu_at(t - cfg.vaccination_delay);
        StepResult step;
        if (with_sensitivities) {
            step = ode_step_with_sens(state, sens, active, beta, theta, cfg, nu, d_inc);
            out.d_incidence.row(t - 1) = d_inc.transpose();
        } else {
            step = ode_step(state, beta, theta, cfg, nu);
        }
        state = step.state;
        out.clamp_count += step.clamped;
        out.states.push_back(state);
        out.incidence.push_back(step.incidence);
    }

    const auto& f = sched.f_delay;
    for (int t = 1; t <= T; ++t) {
        const double ifr_t = sched.ifr_at(t);
        double acc = 0.0;
        for (int k = 1; k < cfg.window && k < t && k < static_cast<int>(f.size()); ++k) {
            acc += out.incidence[static_cast<std::size_t>(t - k - 1)] *
                   f[static_cast<std::size_t>(k)];
            if (with_sensitivities) {
                out.d_deaths.row(t - 1) +=
                    ifr_t * f[static_cast<std::size_t>(k)] * out.d_incidence.row(t - k - 1);
            }
        }
        out.deaths[static_cast<std::size_t>(t - 1)] = ifr_t * acc;
    }
    return out;
}

}  // namespace epiregime::dynamics
