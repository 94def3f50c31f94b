#pragma once

#include <Eigen/Dense>

#include "grum/types.hpp"

namespace grum {

/// Dimension of the free parameter vector: (m-1) + K*L.
int free_dim(int m, int k_dim, int l_dim);

/// Free vector layout: (delta_1..delta_{m-1}, B row-major). delta_0 is the
/// pinned normalization coordinate and never appears.
Eigen::VectorXd free_vector(const Parameters& params);

/// Inverse of free_vector; delta[0] is forced to 0.
Parameters embed_vector(const Eigen::VectorXd& theta, int m, int k_dim, int l_dim);

/// m x d Jacobian of (mu_0(x)..mu_{m-1}(x)) w.r.t. the free vector, for one
/// agent with attributes x. Row j is grad_theta mu_j; constant in theta
/// because mu is linear.
Eigen::MatrixXd agent_jacobian(const Eigen::VectorXd& x, const AlternativeSet& alternatives);

/// (n*m) x d stacked agent Jacobians, row i*m + j = grad of mu_ij.
/// This is the linear map theta -> vec(mu); its column rank decides
/// identifiability (see evaluation.hpp).
Eigen::MatrixXd design_matrix(const AgentPool& agents, const AlternativeSet& alternatives);

/// n x m matrix of deterministic utilities mu_ij = delta_j + x_i B z_j^T.
Eigen::MatrixXd mean_utilities(const Parameters& params, const AlternativeSet& alternatives,
                               const AgentPool& agents);

/// Draw one full ranking per agent by sorting mu_ij + sigma * eps_ij
/// descending, ties broken by alternative index ascending.
Profile sample_profile(const Parameters& params, const AlternativeSet& alternatives,
                       const AgentPool& agents, const NoiseModel& noise, std::uint64_t seed);

/// log Pr(theta) up to an additive constant: 0 for the flat prior,
/// -(lambda/2) ||theta||^2 for the gaussian prior.
double log_prior(const Eigen::VectorXd& theta, const Prior& prior);
Eigen::VectorXd log_prior_grad(const Eigen::VectorXd& theta, const Prior& prior);
Eigen::MatrixXd log_prior_hess(int d, const Prior& prior);

} // namespace grum
