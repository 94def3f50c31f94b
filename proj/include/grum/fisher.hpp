#pragma once

#include <Eigen/Dense>

#include "grum/gibbs.hpp"
#include "grum/types.hpp"

namespace grum {

/// d x d symmetric information matrix over the free parameter vector.
using InfoMatrix = Eigen::MatrixXd;

/// Clamp eigenvalues below rel_floor * lambda_max up to that floor. Monte-
/// Carlo noise can push small eigenvalues slightly negative; the criteria
/// need a usable precision matrix.
InfoMatrix psd_repair(const InfoMatrix& info, double rel_floor = 1e-8);

/// Observed information at theta_hat by the missing-information identity:
/// per ranking, E[-complete-data Hessian | pi] minus the conditional score
/// covariance, expectations taken over fresh Gibbs samples. Chains are
/// seeded per agent, so the matrix is exactly additive over any split of the
/// ranking list. Pass a proper prior to add its precision lambda * I.
InfoMatrix observed_info(const Profile& profile, const Parameters& theta_hat,
                         const NoiseModel& noise, const GibbsConfig& gibbs,
                         const Prior* prior = nullptr);

/// Expected per-ranking information for one candidate design: simulate n_sim
/// rankings from the model at theta_hat with agent attributes design_x and
/// average their per-ranking observed information.
InfoMatrix expected_info(const Eigen::VectorXd& design_x, const Parameters& theta_hat,
                         const AlternativeSet& alternatives, const NoiseModel& noise,
                         int n_sim = 200, std::uint64_t seed = 0,
                         const GibbsConfig& chain = GibbsConfig{});

} // namespace grum
