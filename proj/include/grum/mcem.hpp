#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grum/evaluation.hpp"
#include "grum/gibbs.hpp"
#include "grum/types.hpp"

namespace grum {

struct FitConfig {
    int max_iters = 30;
    GibbsConfig gibbs;
    int newton_steps = 1;
    double newton_damping = 1.0;
    double convergence_tol = 1e-3;
    std::uint64_t seed = 0;
    // Optional per-iteration log-posterior estimate (extra Monte-Carlo cost).
    bool monitor_logpost = false;
    int monitor_reps = 200;

    void validate() const;
};

struct IterationRecord {
    Eigen::VectorXd theta; // free vector after the M-step
    double q_before = 0.0; // surrogate at theta^t under this iteration's moments
    double q_after = 0.0;  // surrogate at theta^{t+1}, same moments
    double logpost = std::numeric_limits<double>::quiet_NaN();
    double logpost_se = std::numeric_limits<double>::quiet_NaN();
};

struct LogPostEstimate {
    double value = 0.0;
    double se = 0.0;
};

struct FitResult {
    Parameters theta_hat;
    std::vector<IterationRecord> trace;
    std::vector<AgentMoments> moments; // from the final iteration's E-step
    DiagnosticsReport diagnostics;
    std::vector<std::string> warnings;
};

/// One Gibbs chain per observed ranking, seeded by (agent, iteration) so an
/// agent's samples do not depend on scheduling or on the other agents.
std::vector<AgentMoments> e_step(const Profile& profile, const Parameters& params_t,
                                 const NoiseModel& noise, const GibbsConfig& gibbs,
                                 int iteration = 0);

/// Maximizer of the frozen surrogate. The normal family makes the surrogate
/// exactly quadratic, so one undamped Newton step is exact.
Parameters m_step(const std::vector<AgentMoments>& moments, const Parameters& params_t,
                  const Profile& profile, const Prior& prior, const NoiseModel& noise,
                  const FitConfig& config);

/// sum_ij (mu_ij S_ij - mu_ij^2 / 2) / sigma^2 + log prior, over observed
/// rankings. Deterministic given the moments.
double surrogate_q(const Parameters& theta, const std::vector<AgentMoments>& moments,
                   const Profile& profile, const NoiseModel& noise, const Prior& prior);

/// Unbiased sequential-conditioning estimate of each ranking's probability:
/// draw the latent utilities top-down from one-sided truncated normals and
/// average the products of conditioning probabilities. Seeded per agent so
/// repeated calls share randomness across evaluation points.
LogPostEstimate estimate_log_posterior(const Profile& profile, const Parameters& params,
                                       const Prior& prior, const NoiseModel& noise,
                                       int reps, std::uint64_t seed);

/// Monte-Carlo EM for the MAP. Diagnostics run first: a Condition-1 or
/// identifiability failure is fatal under a flat prior (unbounded posterior)
/// and a recorded warning under a proper gaussian prior.
FitResult fit_map(const Profile& profile, const Prior& prior, const NoiseModel& noise,
                  const FitConfig& config);

} // namespace grum
