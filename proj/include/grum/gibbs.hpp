#pragma once

#include <vector>

#include <Eigen/Dense>

#include "grum/types.hpp"

namespace grum {

struct GibbsConfig {
    int n_samples = 200; // retained sweeps
    int burn_in = 50;    // discarded sweeps
    int thin = 1;        // keep every thin-th sweep after burn-in
    std::uint64_t seed = 0;

    void validate() const;
};

/// Monte-Carlo moments of one agent's latent utilities conditioned on her
/// observed ranking, accumulated over retained Gibbs sweeps.
///   s               = E[u | pi]                    (length m)
///   mean_score      = E[grad_theta log P(pi,u) | pi]  (length d)
///   sum_score_outer = sum over sweeps of score * score^T (d x d)
struct AgentMoments {
    Eigen::VectorXd s;
    Eigen::VectorXd mean_score;
    Eigen::MatrixXd sum_score_outer;
    long n_retained = 0;
};

/// Single-site Gibbs sampler for u | u_{pi(0)} > ... > u_{pi(m-1)} with
/// independent N(mu_j, sigma^2) coordinates. Sites are updated in ranking
/// order; the full conditional of each is a two-sided truncated normal
/// bounded by its ranked neighbours. grad_eta is the m x d matrix of
/// grad_theta eta_ij rows (mu-Jacobian / sigma^2 for the normal family);
/// the per-sweep complete-data score is grad_eta^T (u - mu). When retained
/// is non-null every kept sweep's utility vector is appended to it.
AgentMoments run_chain(const Ranking& ranking, const Eigen::VectorXd& mu_row,
                       const NoiseModel& noise, const Eigen::MatrixXd& grad_eta,
                       const GibbsConfig& config,
                       std::vector<Eigen::VectorXd>* retained = nullptr);

} // namespace grum
