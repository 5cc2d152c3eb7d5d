#include "epiregime/params.hpp"

#include <cmath>

#include "epiregime/util/errors.hpp"
#include "epiregime/util/math.hpp"

namespace epiregime {

std::vector<int> FixedConfig::destinations() const {
    if (!init_destinations.empty()) return init_destinations;
    std::vector<int> d;
    for (int i = 0; i + 1 < n_regimes; ++i) d.push_back(i);
    if (d.empty()) d.push_back(0);  // K == 1 fallback, not reachable through validate()
    return d;
}

void FixedConfig::validate() const {
    if (n_regimes < 2) throw ValidationError("FixedConfig.n_regimes must be >= 2");
    if (n_pop <= 0) throw ValidationError("FixedConfig.n_pop must be positive");
    if (rho < 0.0 || rho > 1.0) throw ValidationError("FixedConfig.rho must lie in [0,1]");
    if (window < 1) throw ValidationError("FixedConfig.window must be >= 1");
    if (dt_substeps < 1) throw ValidationError("FixedConfig.dt_substeps must be >= 1");
    if (vaccination_delay < 0) throw ValidationError("FixedConfig.vaccination_delay must be >= 0");
    if (e0 < 0.0 || e0 > n_pop) throw ValidationError("FixedConfig.e0 must lie in [0, n_pop]");
    if (tie_index() < 0 || tie_index() >= n_regimes)
        throw ValidationError("FixedConfig.beta_tie_index out of range");
    const auto dest = destinations();
    if (dest.empty()) throw ValidationError("FixedConfig.init_destinations must be nonempty");
    for (std::size_t i = 0; i < dest.size(); ++i) {
        if (dest[i] < 0 || dest[i] >= n_regimes)
            throw ValidationError("FixedConfig.init_destinations entry out of range");
        for (std::size_t j = 0; j < i; ++j) {
            if (dest[i] == dest[j])
                throw ValidationError("FixedConfig.init_destinations entries must be distinct");
        }
    }
}

bool ThetaParams::satisfies_invariants() const {
    const int K = n_regimes();
    if (K < 1) return false;
    for (int i = 0; i < K; ++i) {
        if (!std::isfinite(log_beta(i))) return false;
        if (i > 0 && !(log_beta(i - 1) < log_beta(i))) return false;
    }
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(epsilon > 0.0)) return false;
    if (p.size() != K - 1) return false;
    for (int i = 0; i < p.size(); ++i) {
        if (!(p(i) > 0.0 && p(i) < 1.0)) return false;
    }
    if (p_init.size() < 1) return false;
    double sum = 0.0;
    for (int i = 0; i < p_init.size(); ++i) {
        if (!(p_init(i) > 0.0 && p_init(i) < 1.0) && p_init.size() > 1) return false;
        sum += p_init(i);
    }
    if (std::abs(sum - 1.0) > 1e-9) return false;
    if (r.size() != K + 1 || psi.size() != K + 1) return false;
    for (int i = 0; i <= K; ++i) {
        if (!(r(i) > 0.0)) return false;
        if (!(psi(i) > 0.0 && psi(i) < 1.0)) return false;
    }
    return phi_cases > 0.0 && phi_deaths > 0.0;
}

void ThetaParams::validate() const {
    const int K = n_regimes();
    if (K < 1) throw ValidationError("theta.log_beta is empty");
    for (int i = 1; i < K; ++i) {
        if (!(log_beta(i - 1) < log_beta(i)))
            throw ValidationError("theta.log_beta is not strictly increasing");
    }
    if (!(gamma1 > 0.0)) throw ValidationError("theta.gamma1 must be > 0");
    if (!(gamma2 > 0.0)) throw ValidationError("theta.gamma2 must be > 0");
    if (!(epsilon > 0.0)) throw ValidationError("theta.epsilon must be > 0");
    if (p.size() != K - 1) throw ValidationError("theta.p must have K-1 entries");
    for (int i = 0; i < p.size(); ++i) {
        if (!(p(i) > 0.0 && p(i) < 1.0)) throw ValidationError("theta.p entries must lie in (0,1)");
    }
    if (p_init.size() < 1) throw ValidationError("theta.p_init is empty");
    double sum = 0.0;
    for (int i = 0; i < p_init.size(); ++i) sum += p_init(i);
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("theta.p_init must sum to 1");
    if (p_init.size() > 1) {
        for (int i = 0; i < p_init.size(); ++i) {
            if (!(p_init(i) > 0.0 && p_init(i) < 1.0))
                throw ValidationError("theta.p_init entries must lie in (0,1)");
        }
    }
    if (r.size() != K + 1) throw ValidationError("theta.r must have K+1 entries");
    if (psi.size() != K + 1) throw ValidationError("theta.psi must have K+1 entries");
    for (int i = 0; i <= K; ++i) {
        if (!(r(i) > 0.0)) throw ValidationError("theta.r entries must be > 0");
        if (!(psi(i) > 0.0 && psi(i) < 1.0))
            throw ValidationError("theta.psi entries must lie in (0,1)");
    }
    if (!(phi_cases > 0.0)) throw ValidationError("theta.phi_cases must be > 0");
    if (!(phi_deaths > 0.0)) throw ValidationError("theta.phi_deaths must be > 0");
}

ThetaGradient ThetaGradient::zeros(int K, int D) {
    ThetaGradient g;
    g.log_beta = Eigen::VectorXd::Zero(K);
    g.p = Eigen::VectorXd::Zero(K - 1);
    g.p_init = Eigen::VectorXd::Zero(D);
    g.r = Eigen::VectorXd::Zero(K + 1);
    g.psi = Eigen::VectorXd::Zero(K + 1);
    return g;
}

ThetaGradient& ThetaGradient::operator+=(const ThetaGradient& other) {
    log_beta += other.log_beta;
    gamma1 += other.gamma1;
    gamma2 += other.gamma2;
    epsilon += other.epsilon;
    p += other.p;
    p_init += other.p_init;
    r += other.r;
    psi += other.psi;
    phi_cases += other.phi_cases;
    phi_deaths += other.phi_deaths;
    return *this;
}

std::vector<std::string> ParamLayout::names() const {
    std::vector<std::string> out;
    const int K = n_regimes, D = n_destinations;
    for (int i = 0; i < K; ++i) out.push_back("log_beta_" + std::to_string(i + 1));
    out.push_back("gamma_1");
    out.push_back("gamma_2");
    out.push_back("epsilon");
    for (int i = 0; i + 1 < K; ++i) out.push_back("p_" + std::to_string(i + 1));
    for (int i = 0; i + 1 < D; ++i) out.push_back("p_init_" + std::to_string(i + 1));
    for (int i = 0; i < K; ++i) out.push_back("r_" + std::to_string(i + 1));
    out.push_back("r_init");
    for (int i = 0; i < K; ++i) out.push_back("psi_" + std::to_string(i + 1));
    out.push_back("psi_init");
    out.push_back("phi_cases");
    out.push_back("phi_deaths");
    return out;
}

std::vector<std::string> ParamLayout::report_names() const {
    std::vector<std::string> out;
    for (const auto& n : names()) {
        if (n == "r_init" || n == "psi_init") continue;
        out.push_back(n);
    }
    return out;
}

Eigen::VectorXd ParamLayout::constrained_values(const ThetaParams& theta) const {
    const int K = n_regimes, D = n_destinations;
    Eigen::VectorXd out(dim());
    int k = 0;
    for (int i = 0; i < K; ++i) out(k++) = theta.log_beta(i);
    out(k++) = theta.gamma1;
    out(k++) = theta.gamma2;
    out(k++) = theta.epsilon;
    for (int i = 0; i + 1 < K; ++i) out(k++) = theta.p(i);
    for (int i = 0; i + 1 < D; ++i) out(k++) = theta.p_init(i);
    for (int i = 0; i <= K; ++i) out(k++) = theta.r(i);
    for (int i = 0; i <= K; ++i) out(k++) = theta.psi(i);
    out(k++) = theta.phi_cases;
    out(k++) = theta.phi_deaths;
    return out;
}

Eigen::VectorXd ParamLayout::report_values(const ThetaParams& theta) const {
    const Eigen::VectorXd all = constrained_values(theta);
    const auto all_names = names();
    Eigen::VectorXd out(static_cast<int>(report_names().size()));
    int k = 0;
    for (int i = 0; i < all.size(); ++i) {
        if (all_names[i] == "r_init" || all_names[i] == "psi_init") continue;
        out(k++) = all(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transform

Eigen::VectorXd to_unconstrained(const ThetaParams& theta) {
    theta.validate();
    const ParamLayout layout = ParamLayout::of(theta);
    const int K = layout.n_regimes, D = layout.n_destinations;
    Eigen::VectorXd v(layout.dim());

    v(0) = theta.log_beta(0);
    for (int i = 1; i < K; ++i) v(i) = std::log(theta.log_beta(i) - theta.log_beta(i - 1));
    v(layout.gamma1_offset()) = std::log(theta.gamma1);
    v(layout.gamma2_offset()) = std::log(theta.gamma2);
    v(layout.epsilon_offset()) = std::log(theta.epsilon);
    for (int i = 0; i + 1 < K; ++i) v(layout.p_offset() + i) = logit(theta.p(i));

    // inverse stick-breaking
    double rem = 1.0;
    for (int j = 0; j + 1 < D; ++j) {
        const double z = theta.p_init(j) / rem;
        v(layout.p_init_offset() + j) = logit(z);
        rem *= (1.0 - z);
    }

    for (int i = 0; i <= K; ++i) v(layout.r_offset() + i) = std::log(theta.r(i));
    for (int i = 0; i <= K; ++i) v(layout.psi_offset() + i) = logit(theta.psi(i));
    v(layout.phi_cases_offset()) = std::log(theta.phi_cases);
    v(layout.phi_deaths_offset()) = std::log(theta.phi_deaths);
    return v;
}

ThetaParams from_unconstrained(const Eigen::VectorXd& v, const ParamLayout& layout) {
    if (v.size() != layout.dim()) {
        throw ShapeError("from_unconstrained: expected length " + std::to_string(layout.dim()) +
                         ", got " + std::to_string(v.size()));
    }
    const int K = layout.n_regimes, D = layout.n_destinations;
    ThetaParams theta;
    theta.log_beta.resize(K);
    theta.log_beta(0) = v(0);
    for (int i = 1; i < K; ++i) theta.log_beta(i) = theta.log_beta(i - 1) + std::exp(v(i));
    theta.gamma1 = std::exp(v(layout.gamma1_offset()));
    theta.gamma2 = std::exp(v(layout.gamma2_offset()));
    theta.epsilon = std::exp(v(layout.epsilon_offset()));
    theta.p.resize(K - 1);
    for (int i = 0; i + 1 < K; ++i) theta.p(i) = sigmoid(v(layout.p_offset() + i));
    theta.p_init.resize(D);
    double rem = 1.0;
    for (int j = 0; j + 1 < D; ++j) {
        const double z = sigmoid(v(layout.p_init_offset() + j));
        theta.p_init(j) = z * rem;
        rem *= (1.0 - z);
    }
    theta.p_init(D - 1) = rem;
    theta.r.resize(K + 1);
    theta.psi.resize(K + 1);
    for (int i = 0; i <= K; ++i) {
        theta.r(i) = std::exp(v(layout.r_offset() + i));
        theta.psi(i) = sigmoid(v(layout.psi_offset() + i));
    }
    theta.phi_cases = std::exp(v(layout.phi_cases_offset()));
    theta.phi_deaths = std::exp(v(layout.phi_deaths_offset()));
    return theta;
}

double transform_log_jacobian(const Eigen::VectorXd& v, const ParamLayout& layout) {
    const int K = layout.n_regimes, D = layout.n_destinations;
    double lj = 0.0;
    for (int i = 1; i < K; ++i) lj += v(i);                // ordered gaps
    lj += v(layout.gamma1_offset()) + v(layout.gamma2_offset()) + v(layout.epsilon_offset());
    for (int i = 0; i + 1 < K; ++i) {
        const double x = sigmoid(v(layout.p_offset() + i));
        lj += std::log(x) + std::log1p(-x);
    }
    double rem = 1.0;
    for (int j = 0; j + 1 < D; ++j) {
        const double z = sigmoid(v(layout.p_init_offset() + j));
        lj += std::log(z) + std::log1p(-z) + std::log(rem);
        rem *= (1.0 - z);
    }
    for (int i = 0; i <= K; ++i) {
        lj += v(layout.r_offset() + i);
        const double x = sigmoid(v(layout.psi_offset() + i));
        lj += std::log(x) + std::log1p(-x);
    }
    lj += v(layout.phi_cases_offset()) + v(layout.phi_deaths_offset());
    return lj;
}

Eigen::VectorXd transform_log_jacobian_gradient(const Eigen::VectorXd& v,
                                                const ParamLayout& layout) {
    const int K = layout.n_regimes, D = layout.n_destinations;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(layout.dim());
    for (int i = 1; i < K; ++i) g(i) = 1.0;
    g(layout.gamma1_offset()) = 1.0;
    g(layout.gamma2_offset()) = 1.0;
    g(layout.epsilon_offset()) = 1.0;
    for (int i = 0; i + 1 < K; ++i) {
        const double x = sigmoid(v(layout.p_offset() + i));
        g(layout.p_offset() + i) = 1.0 - 2.0 * x;
    }
    for (int j = 0; j + 1 < D; ++j) {
        const double z = sigmoid(v(layout.p_init_offset() + j));
        g(layout.p_init_offset() + j) =
            1.0 - 2.0 * z - z * static_cast<double>(D - 2 - j);
    }
    for (int i = 0; i <= K; ++i) {
        g(layout.r_offset() + i) = 1.0;
        const double x = sigmoid(v(layout.psi_offset() + i));
        g(layout.psi_offset() + i) = 1.0 - 2.0 * x;
    }
    g(layout.phi_cases_offset()) = 1.0;
    g(layout.phi_deaths_offset()) = 1.0;
    return g;
}

Eigen::VectorXd chain_to_unconstrained(const Eigen::VectorXd& v, const ParamLayout& layout,
                                       const ThetaGradient& grad) {
    const int K = layout.n_regimes, D = layout.n_destinations;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(layout.dim());

    // ordered block: b_i = v_0 + sum_{1<=j<=i} exp(v_j)
    double tail = 0.0;
    for (int i = 0; i < K; ++i) tail += grad.log_beta(i);
    g(0) = tail;
    for (int j = 1; j < K; ++j) {
        double s = 0.0;
        for (int i = j; i < K; ++i) s += grad.log_beta(i);
        g(j) = std::exp(v(j)) * s;
    }

    g(layout.gamma1_offset()) = grad.gamma1 * std::exp(v(layout.gamma1_offset()));
    g(layout.gamma2_offset()) = grad.gamma2 * std::exp(v(layout.gamma2_offset()));
    g(layout.epsilon_offset()) = grad.epsilon * std::exp(v(layout.epsilon_offset()));

    for (int i = 0; i + 1 < K; ++i) {
        const double x = sigmoid(v(layout.p_offset() + i));
        g(layout.p_offset() + i) = grad.p(i) * x * (1.0 - x);
    }

    // stick-breaking adjoint
    if (D > 1) {
        std::vector<double> z(D - 1), rem(D);
        rem[0] = 1.0;
        for (int j = 0; j + 1 < D; ++j) {
            z[j] = sigmoid(v(layout.p_init_offset() + j));
            rem[j + 1] = rem[j] * (1.0 - z[j]);
        }
        double rem_bar = grad.p_init(D - 1);  // x_{D-1} = rem_{D-1}
        for (int j = D - 2; j >= 0; --j) {
            const double z_bar = grad.p_init(j) * rem[j] - rem_bar * rem[j];
            rem_bar = grad.p_init(j) * z[j] + rem_bar * (1.0 - z[j]);
            g(layout.p_init_offset() + j) = z_bar * z[j] * (1.0 - z[j]);
        }
    }

    for (int i = 0; i <= K; ++i) {
        g(layout.r_offset() + i) = grad.r(i) * std::exp(v(layout.r_offset() + i));
        const double x = sigmoid(v(layout.psi_offset() + i));
        g(layout.psi_offset() + i) = grad.psi(i) * x * (1.0 - x);
    }
    g(layout.phi_cases_offset()) = grad.phi_cases * std::exp(v(layout.phi_cases_offset()));
    g(layout.phi_deaths_offset()) = grad.phi_deaths * std::exp(v(layout.phi_deaths_offset()));
    return g;
}

// ---------------------------------------------------------------------------
// Priors

double GammaPrior::log_density(double x) const {
    if (!(x > 0.0)) return neg_inf;
    return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}

double GammaPrior::grad_log_density(double x) const { return (shape - 1.0) / x - 1.0 / scale; }

PriorSpec PriorSpec::defaults(const FixedConfig& cfg) {
    const int K = cfg.n_regimes;
    PriorSpec spec;
    spec.beta_mean.resize(K);
    if (K == 4) {
        spec.beta_mean << std::log(0.15), std::log(0.4), std::log(0.6), std::log(1.2);
    } else {
        // log-linear ramp over the published four-regime range
        const double lo = std::log(0.15), hi = std::log(1.2);
        for (int i = 0; i < K; ++i) {
            spec.beta_mean(i) = K == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (K - 1);
        }
    }
    spec.beta_cov = Eigen::MatrixXd::Identity(K, K);
    spec.transition_conc = static_cast<double>(K);
    spec.r_shape.resize(K + 1);
    spec.r_scale = Eigen::VectorXd::Ones(K + 1);
    for (int i = 0; i < K; ++i) spec.r_shape(i) = 30.0;
    if (K == 4) {
        spec.r_shape(0) = 40.0;
        spec.r_shape(1) = 30.0;
        spec.r_shape(2) = 20.0;
        spec.r_shape(3) = 30.0;
    }
    spec.r_shape(K) = 28.0;  // non-recurring initial regime
    return spec;
}

void PriorSpec::validate(const FixedConfig& cfg) const {
    const int K = cfg.n_regimes;
    if (beta_mean.size() != K) throw ValidationError("prior.beta_mean must have K entries");
    if (beta_cov.rows() != K || beta_cov.cols() != K)
        throw ValidationError("prior.beta_cov must be K x K");
    if (r_shape.size() != K + 1 || r_scale.size() != K + 1)
        throw ValidationError("prior.r_shape / r_scale must have K+1 entries");
    for (const GammaPrior* g : {&gamma1, &gamma2, &epsilon, &phi_cases, &phi_deaths}) {
        if (!(g->shape > 0.0) || !(g->scale > 0.0))
            throw ValidationError("prior gamma hyperparameters must be positive");
    }
    if (!(transition_conc > 0.0)) throw ValidationError("prior.transition_conc must be positive");
    if (!(psi_a > 0.0) || !(psi_b > 0.0)) throw ValidationError("prior.psi hyperparameters must be positive");
}

static double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_prior(const ThetaParams& theta, const PriorSpec& prior) {
    if (!theta.satisfies_invariants()) return neg_inf;
    const int K = theta.n_regimes();
    const int D = theta.n_destinations();

    double lp = 0.0;
    // ordered multivariate normal (unnormalised over the ordering constraint)
    {
        Eigen::LLT<Eigen::MatrixXd> llt(prior.beta_cov);
        const Eigen::VectorXd diff = theta.log_beta - prior.beta_mean;
        const Eigen::VectorXd half = llt.matrixL().solve(diff);
        double logdet = 0.0;
        for (int i = 0; i < K; ++i) logdet += std::log(llt.matrixL()(i, i));
        lp += -0.5 * half.squaredNorm() - logdet - 0.5 * K * std::log(2.0 * M_PI);
    }
    lp += prior.gamma1.log_density(theta.gamma1);
    lp += prior.gamma2.log_density(theta.gamma2);
    lp += prior.epsilon.log_density(theta.epsilon);

    const double k = prior.transition_conc;
    for (int i = 0; i + 1 < K; ++i) {
        lp += (k - 1.0) * (std::log(theta.p(i)) + std::log1p(-theta.p(i))) - log_beta_fn(k, k);
    }
    if (D > 1) {
        lp += std::lgamma(k * D) - D * std::lgamma(k);
        for (int j = 0; j < D; ++j) lp += (k - 1.0) * std::log(theta.p_init(j));
    }
    for (int i = 0; i <= K; ++i) {
        lp += GammaPrior{prior.r_shape(i), prior.r_scale(i)}.log_density(theta.r(i));
        lp += (prior.psi_a - 1.0) * std::log(theta.psi(i)) +
              (prior.psi_b - 1.0) * std::log1p(-theta.psi(i)) -
              log_beta_fn(prior.psi_a, prior.psi_b);
    }
    lp += prior.phi_cases.log_density(theta.phi_cases);
    lp += prior.phi_deaths.log_density(theta.phi_deaths);
    return std::isfinite(lp) ? lp : neg_inf;
}

ThetaGradient grad_log_prior(const ThetaParams& theta, const PriorSpec& prior) {
    const int K = theta.n_regimes();
    const int D = theta.n_destinations();
    ThetaGradient g = ThetaGradient::zeros(K, D);

    Eigen::LLT<Eigen::MatrixXd> llt(prior.beta_cov);
    g.log_beta = -llt.solve(theta.log_beta - prior.beta_mean);
    g.gamma1 = prior.gamma1.grad_log_density(theta.gamma1);
    g.gamma2 = prior.gamma2.grad_log_density(theta.gamma2);
    g.epsilon = prior.epsilon.grad_log_density(theta.epsilon);

    const double k = prior.transition_conc;
    for (int i = 0; i + 1 < K; ++i) {
        g.p(i) = (k - 1.0) * (1.0 / theta.p(i) - 1.0 / (1.0 - theta.p(i)));
    }
    if (D > 1) {
        for (int j = 0; j < D; ++j) g.p_init(j) = (k - 1.0) / theta.p_init(j);
    }
    for (int i = 0; i <= K; ++i) {
        g.r(i) = GammaPrior{prior.r_shape(i), prior.r_scale(i)}.grad_log_density(theta.r(i));
        g.psi(i) = (prior.psi_a - 1.0) / theta.psi(i) - (prior.psi_b - 1.0) / (1.0 - theta.psi(i));
    }
    g.phi_cases = prior.phi_cases.grad_log_density(theta.phi_cases);
    g.phi_deaths = prior.phi_deaths.grad_log_density(theta.phi_deaths);
    return g;
}

double log_prior_unconstrained(const Eigen::VectorXd& v, const ParamLayout& layout,
                               const PriorSpec& prior, Eigen::VectorXd* grad) {
    for (int i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) return neg_inf;
    }
    const ThetaParams theta = from_unconstrained(v, layout);
    const double lp = log_prior(theta, prior);
    if (!std::isfinite(lp)) return neg_inf;
    const double lj = transform_log_jacobian(v, layout);
    if (grad) {
        *grad = chain_to_unconstrained(v, layout, grad_log_prior(theta, prior)) +
                transform_log_jacobian_gradient(v, layout);
    }
    return lp + lj;
}

ThetaParams sample_prior(const PriorSpec& prior, const FixedConfig& cfg, RngStream& rng) {
    const int K = cfg.n_regimes;
    const auto dest = cfg.destinations();
    const int D = static_cast<int>(dest.size());

    ThetaParams theta;
    theta.log_beta.resize(K);
    const Eigen::LLT<Eigen::MatrixXd> llt(prior.beta_cov);
    const Eigen::MatrixXd L = llt.matrixL();
    for (int attempt = 0;; ++attempt) {
        Eigen::VectorXd z(K);
        for (int i = 0; i < K; ++i) z(i) = rng.normal();
        theta.log_beta = prior.beta_mean + L * z;
        bool ordered = true;
        for (int i = 1; i < K; ++i) ordered &= theta.log_beta(i - 1) < theta.log_beta(i);
        if (ordered) break;
        if (attempt > 1000000)
            throw NumericalError("ordered-normal rejection sampler failed to accept");
    }
    theta.gamma1 = rng.gamma(prior.gamma1.shape, prior.gamma1.scale);
    theta.gamma2 = rng.gamma(prior.gamma2.shape, prior.gamma2.scale);
    theta.epsilon = rng.gamma(prior.epsilon.shape, prior.epsilon.scale);
    theta.p.resize(K - 1);
    for (int i = 0; i + 1 < K; ++i) theta.p(i) = rng.beta(prior.transition_conc, prior.transition_conc);
    if (D > 1) {
        std::vector<double> conc(D, prior.transition_conc);
        const auto x = rng.dirichlet(conc);
        theta.p_init = Eigen::Map<const Eigen::VectorXd>(x.data(), D);
    } else {
        theta.p_init = Eigen::VectorXd::Ones(1);
    }
    theta.r.resize(K + 1);
    theta.psi.resize(K + 1);
    for (int i = 0; i <= K; ++i) {
        theta.r(i) = rng.gamma(prior.r_shape(i), prior.r_scale(i));
        theta.psi(i) = rng.beta(prior.psi_a, prior.psi_b);
    }
    theta.phi_cases = rng.gamma(prior.phi_cases.shape, prior.phi_cases.scale);
    theta.phi_deaths = rng.gamma(prior.phi_deaths.shape, prior.phi_deaths.scale);
    return theta;
}

}  // namespace epiregime
