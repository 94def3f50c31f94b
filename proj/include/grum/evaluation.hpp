#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "grum/types.hpp"

namespace grum {

struct Condition1Result {
    bool ok = false;
    // Violation witness: no ranking places any member of c1 above any member
    // of c2, so utilities of c2 can drift to +infinity. Empty when ok.
    std::vector<int> witness_c1;
    std::vector<int> witness_c2;
};

struct IdentifiabilityResult {
    bool identifiable = false;
    int rank = 0;
    int d = 0;
};

struct DiagnosticsReport {
    bool condition1_ok = false;
    std::vector<int> witness_c1;
    std::vector<int> witness_c2;
    bool identifiable = false;
    int design_rank = 0;
    int d = 0;
};

/// (concordant - discordant) / (m(m-1)/2) over unordered alternative pairs.
double kendall_tau(const Ranking& a, const Ranking& b);

/// Alternatives sorted by delta descending, ties by index ascending.
Ranking social_ranking(const Parameters& theta_hat);

/// Alternatives sorted by mu_j(x) = delta_j + x B z_j^T descending.
Ranking personalized_ranking(const Parameters& theta_hat, const Eigen::VectorXd& x,
                             const AlternativeSet& alternatives);

/// Edge a->b iff some ranking places a above b; the posterior is bounded in
/// the delta directions iff this digraph is strongly connected.
Condition1Result check_condition1(const Profile& profile);

/// Column rank of the stacked mu-Jacobian over all (agent, alternative)
/// pairs, via singular values with a 1e-8 relative threshold.
IdentifiabilityResult check_identifiability(const AgentPool& agents,
                                            const AlternativeSet& alternatives);

/// Condition 1 on the profile plus identifiability restricted to the agents
/// that actually contributed rankings.
DiagnosticsReport run_diagnostics(const Profile& profile);

/// Monte-Carlo frequency of every ranking under the generative model.
/// Enumeration of all m! rankings caps m at 5.
std::map<std::vector<int>, double> brute_force_rank_prob(
    const Parameters& theta, const Eigen::VectorXd& x,
    const AlternativeSet& alternatives, const NoiseModel& noise, long n_mc,
    std::uint64_t seed);

} // namespace grum
