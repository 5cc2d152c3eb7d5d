#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "epiregime/util/rng.hpp"

namespace epiregime {

/// Fixed (non-inferred) model constants. Treated as immutable after
/// construction; validate() is called once by the loaders.
struct FixedConfig {
    double rho = 0.5;           ///< vaccine efficacy
    int vaccination_delay = 45; ///< days between first dose and effect (U)
    int window = 28;            ///< death-convolution memory, days
    double n_pop = 0.0;         ///< population size
    int n_regimes = 0;          ///< number of recurring latent regimes (K)
    int dt_substeps = 24;       ///< ODE substeps per day
    double e0 = 100.0;          ///< initial exposed pool (E1 at day 0)
    int beta_tie_index = -1;    ///< transmission index used by the initial regime; -1 = min(2, K-1)
    std::vector<int> init_destinations;  ///< regimes reachable from the initial regime; empty = {0..K-2}

    /// Index of the non-recurring initial regime.
    int initial_regime() const { return n_regimes; }
    int tie_index() const { return beta_tie_index >= 0 ? beta_tie_index : std::min(2, n_regimes - 1); }
    std::vector<int> destinations() const;

    void validate() const;  ///< throws ValidationError
};

/// All static model parameters in constrained space.
///
/// Regimes 0..K-1 are the recurring transmission regimes ordered by
/// intensity; index K is the non-recurring initial regime. r and psi carry
/// K+1 entries (recurring regimes first, initial regime last).
struct ThetaParams {
    Eigen::VectorXd log_beta;  ///< K, strictly increasing
    double gamma1 = 0.0;       ///< exit rate of I1, 1/day
    double gamma2 = 0.0;       ///< exit rate of I2, 1/day
    double epsilon = 0.0;      ///< exit rate of each exposed stage, 1/day
    Eigen::VectorXd p;         ///< K-1 move-up probabilities, each in (0,1)
    Eigen::VectorXd p_init;    ///< simplex over the initial regime's destination set
    Eigen::VectorXd r;         ///< K+1 Negative Binomial duration sizes, > 0
    Eigen::VectorXd psi;       ///< K+1 Negative Binomial duration success probabilities in (0,1)
    double phi_cases = 0.0;
    double phi_deaths = 0.0;

    int n_regimes() const { return static_cast<int>(log_beta.size()); }
    int n_destinations() const { return static_cast<int>(p_init.size()); }

    /// Transmission log-rate of a regime; the initial regime uses the tied index.
    double log_beta_of(int regime, const FixedConfig& cfg) const {
        return log_beta(regime == cfg.initial_regime() ? cfg.tie_index() : regime);
    }

    bool satisfies_invariants() const;
    void validate() const;  ///< throws ValidationError naming the offending field
};

/// Gradient container mirroring ThetaParams (constrained coordinates; the
/// log_beta block differentiates with respect to log beta itself, and the
/// p_init block with respect to the full simplex coordinates).
struct ThetaGradient {
    Eigen::VectorXd log_beta;
    double gamma1 = 0.0, gamma2 = 0.0, epsilon = 0.0;
    Eigen::VectorXd p;
    Eigen::VectorXd p_init;
    Eigen::VectorXd r;
    Eigen::VectorXd psi;
    double phi_cases = 0.0, phi_deaths = 0.0;

    static ThetaGradient zeros(int n_regimes, int n_destinations);
    ThetaGradient& operator+=(const ThetaGradient& other);
};

/// Block offsets of the unconstrained parameter vector.
///
/// Layout: [log_beta ordered-transform | log gamma1 | log gamma2 |
/// log epsilon | logit p | stick-breaking p_init | log r | logit psi |
/// log phi_cases | log phi_deaths].
struct ParamLayout {
    int n_regimes = 0;       // K
    int n_destinations = 0;  // D

    ParamLayout() = default;
    ParamLayout(int K, int D) : n_regimes(K), n_destinations(D) {}
    static ParamLayout of(const ThetaParams& theta) {
        return {theta.n_regimes(), theta.n_destinations()};
    }

    int beta_offset() const { return 0; }
    int gamma1_offset() const { return n_regimes; }
    int gamma2_offset() const { return n_regimes + 1; }
    int epsilon_offset() const { return n_regimes + 2; }
    int p_offset() const { return n_regimes + 3; }
    int p_init_offset() const { return p_offset() + n_regimes - 1; }
    int r_offset() const { return p_init_offset() + n_destinations - 1; }
    int psi_offset() const { return r_offset() + n_regimes + 1; }
    int phi_cases_offset() const { return psi_offset() + n_regimes + 1; }
    int phi_deaths_offset() const { return phi_cases_offset() + 1; }
    int dim() const { return phi_deaths_offset() + 1; }

    /// Names of all sampled components, in layout order, constrained scale.
    std::vector<std::string> names() const;
    /// Components reported in posterior summaries (drops the weakly-identified
    /// initial-regime duration parameters, matching the published table shape).
    std::vector<std::string> report_names() const;
    Eigen::VectorXd report_values(const ThetaParams& theta) const;
    /// All sampled components on the constrained scale, layout order
    /// (p_init contributes its D-1 leading simplex entries).
    Eigen::VectorXd constrained_values(const ThetaParams& theta) const;
};

/// Smooth bijection constrained support -> R^dim.
Eigen::VectorXd to_unconstrained(const ThetaParams& theta);
ThetaParams from_unconstrained(const Eigen::VectorXd& v, const ParamLayout& layout);

/// log |d theta / d v| of from_unconstrained.
double transform_log_jacobian(const Eigen::VectorXd& v, const ParamLayout& layout);
Eigen::VectorXd transform_log_jacobian_gradient(const Eigen::VectorXd& v, const ParamLayout& layout);

/// Pull a constrained-space gradient back to unconstrained coordinates
/// (does not include the log-Jacobian term).
Eigen::VectorXd chain_to_unconstrained(const Eigen::VectorXd& v, const ParamLayout& layout,
                                       const ThetaGradient& grad);

struct GammaPrior {
    double shape = 1.0;
    double scale = 1.0;
    double log_density(double x) const;
    double grad_log_density(double x) const;  // d/dx
    double mean() const { return shape * scale; }
};

/// Prior hyperparameters. Defaults follow the published four-regime
/// specification where one exists and fall back to neutral choices otherwise.
struct PriorSpec {
    Eigen::VectorXd beta_mean;   ///< K; ordered multivariate normal location
    Eigen::MatrixXd beta_cov;    ///< K x K SPD
    GammaPrior gamma1{1600.0, 1.0 / 4000.0};
    GammaPrior gamma2{2500.0, 1.0 / 5000.0};
    GammaPrior epsilon{1000.0, 1.0 / 10000.0};
    double transition_conc = 4.0;  ///< Dirichlet/Beta concentration on transition blocks
    Eigen::VectorXd r_shape;       ///< K+1
    Eigen::VectorXd r_scale;       ///< K+1
    double psi_a = 0.5, psi_b = 0.5;
    GammaPrior phi_cases{2500.0, 1.0 / 500.0};
    GammaPrior phi_deaths{2500.0, 1.0 / 500.0};

    static PriorSpec defaults(const FixedConfig& cfg);
    void validate(const FixedConfig& cfg) const;
};

/// Log prior density in constrained space; -inf outside the support,
/// never an exception.
double log_prior(const ThetaParams& theta, const PriorSpec& prior);
ThetaGradient grad_log_prior(const ThetaParams& theta, const PriorSpec& prior);

/// Log density of the pushforward prior on unconstrained coordinates,
/// including the transform's log-Jacobian. Optionally fills the gradient.
double log_prior_unconstrained(const Eigen::VectorXd& v, const ParamLayout& layout,
                               const PriorSpec& prior, Eigen::VectorXd* grad = nullptr);

/// Draw from the prior (ordered-normal block by rejection).
ThetaParams sample_prior(const PriorSpec& prior, const FixedConfig& cfg, RngStream& rng);

}  // namespace epiregime
