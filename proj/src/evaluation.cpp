#include "grum/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "grum/common.hpp"
#include "grum/model.hpp"
#include "grum/truncnorm.hpp"

namespace grum {

double kendall_tau(const Ranking& a, const Ranking& b) {
    const int m = a.size();
    if (b.size() != m) throw ValidationError("kendall_tau: ranking lengths differ");
    a.validate(m);
    b.validate(m);
    const auto pos_a = a.positions();
    const auto pos_b = b.positions();
    long concordant = 0, discordant = 0;
    for (int p = 0; p < m; ++p)
        for (int q = p + 1; q < m; ++q) {
            const bool same = (pos_a[p] < pos_a[q]) == (pos_b[p] < pos_b[q]);
            (same ? concordant : discordant) += 1;
        }
    return static_cast<double>(concordant - discordant) /
           (static_cast<double>(m) * (m - 1) / 2.0);
}

namespace {

Ranking argsort_descending(const Eigen::VectorXd& score) {
    Ranking r;
    r.order.resize(static_cast<std::size_t>(score.size()));
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](int i, int j) { return score[i] > score[j]; });
    return r;
}

} // namespace

Ranking social_ranking(const Parameters& theta_hat) {
    theta_hat.validate();
    return argsort_descending(theta_hat.delta);
}

Ranking personalized_ranking(const Parameters& theta_hat, const Eigen::VectorXd& x,
                             const AlternativeSet& alternatives) {
    theta_hat.validate();
    alternatives.validate();
    if (x.size() != theta_hat.k_dim())
        throw ValidationError("personalized_ranking: attribute vector length does not match B rows");
    if (alternatives.attr_dim() != theta_hat.l_dim())
        throw ValidationError("personalized_ranking: alternative attribute width does not match B columns");
    if (alternatives.count() != theta_hat.m())
        throw ValidationError("personalized_ranking: alternative count does not match delta length");
    Eigen::VectorXd mu = theta_hat.delta;
    if (theta_hat.k_dim() > 0 && theta_hat.l_dim() > 0)
        mu += alternatives.z * (theta_hat.b.transpose() * x);
    return argsort_descending(mu);
}

Condition1Result check_condition1(const Profile& profile) {
    profile.validate();
    if (profile.rankings.empty())
        throw ValidationError("check_condition1: profile has no rankings");
    const int m = profile.alternatives.count();
    std::vector<std::vector<bool>> beats(m, std::vector<bool>(m, false));
    for (const auto& [agent, ranking] : profile.rankings) {
        (void)agent;
        const auto& pi = ranking.order;
        for (int j = 0; j < m; ++j)
            for (int k = j + 1; k < m; ++k) beats[pi[j]][pi[k]] = true;
    }

    auto reach = beats;
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) {
            if (!reach[i][k]) continue;
            for (int j = 0; j < m; ++j)
                if (reach[k][j]) reach[i][j] = true;
        }

    Condition1Result result;
    result.ok = true;
    for (int i = 0; i < m && result.ok; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && !reach[i][j]) {
                result.ok = false;
                break;
            }
    if (result.ok) return result;

    // A vertex whose forward reach is mutual sits in a sink component of the
    // condensation; that component never loses, so it is the witness c1.
    int v = -1;
    for (int i = 0; i < m && v < 0; ++i) {
        bool sink = true;
        for (int j = 0; j < m; ++j)
            if (reach[i][j] && !reach[j][i]) {
                sink = false;
                break;
            }
        if (sink) v = i;
    }
    for (int j = 0; j < m; ++j) {
        const bool same_scc = j == v || (reach[v][j] && reach[j][v]);
        (same_scc ? result.witness_c1 : result.witness_c2).push_back(j);
    }
    return result;
}

IdentifiabilityResult check_identifiability(const AgentPool& agents,
                                            const AlternativeSet& alternatives) {
    const Eigen::MatrixXd g = design_matrix(agents, alternatives);
    IdentifiabilityResult result;
    result.d = static_cast<int>(g.cols());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(g);
    const Eigen::VectorXd sv = svd.singularValues();
    const double floor = sv.size() > 0 ? 1e-8 * sv[0] : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > floor) ++result.rank;
    result.identifiable = result.rank == result.d;
    return result;
}

DiagnosticsReport run_diagnostics(const Profile& profile) {
    const Condition1Result c1 = check_condition1(profile);

    std::set<int> observed;
    for (const auto& [agent, ranking] : profile.rankings) {
        (void)ranking;
        observed.insert(agent);
    }
    AgentPool subpool;
    subpool.x.resize(static_cast<Eigen::Index>(observed.size()), profile.agents.x.cols());
    Eigen::Index row = 0;
    for (int agent : observed) subpool.x.row(row++) = profile.agents.x.row(agent);
    const IdentifiabilityResult ident = check_identifiability(subpool, profile.alternatives);

    DiagnosticsReport report;
    report.condition1_ok = c1.ok;
    report.witness_c1 = c1.witness_c1;
    report.witness_c2 = c1.witness_c2;
    report.identifiable = ident.identifiable;
    report.design_rank = ident.rank;
    report.d = ident.d;
    return report;
}

std::map<std::vector<int>, double> brute_force_rank_prob(
    const Parameters& theta, const Eigen::VectorXd& x,
    const AlternativeSet& alternatives, const NoiseModel& noise, long n_mc,
    std::uint64_t seed) {
    theta.validate();
    alternatives.validate();
    noise.validate();
    const int m = theta.m();
    if (m > 5) throw ValidationError("brute_force_rank_prob: m! enumeration caps m at 5");
    if (n_mc < 1) throw ValidationError("brute_force_rank_prob: n_mc must be >= 1");

    Eigen::VectorXd mu = theta.delta;
    if (theta.k_dim() > 0 && theta.l_dim() > 0) {
        if (x.size() != theta.k_dim())
            throw ValidationError("brute_force_rank_prob: attribute vector length mismatch");
        mu += alternatives.z * (theta.b.transpose() * x);
    }

    std::map<std::vector<int>, double> prob;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        prob[perm] = 0.0;
    } while (std::next_permutation(perm.begin(), perm.end()));

    Rng rng(seed);
    Eigen::VectorXd u(m);
    std::vector<int> order(m);
    for (long t = 0; t < n_mc; ++t) {
        for (int j = 0; j < m; ++j) u[j] = mu[j] + noise.sigma * standard_normal(rng);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int i, int j) { return u[i] > u[j]; });
        prob[order] += 1.0;
    }
    for (auto& [ranking, p] : prob) p /= static_cast<double>(n_mc);
    return prob;
}

} // namespace grum
