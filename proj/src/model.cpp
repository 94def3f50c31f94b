#include "grum/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "grum/truncnorm.hpp"

namespace grum {

int free_dim(int m, int k_dim, int l_dim) { return (m - 1) + k_dim * l_dim; }

Eigen::VectorXd free_vector(const Parameters& params) {
    params.validate();
    const int m = params.m();
    const int kl = params.k_dim() * params.l_dim();
    Eigen::VectorXd theta(m - 1 + kl);
    theta.head(m - 1) = params.delta.tail(m - 1);
    for (int k = 0; k < params.k_dim(); ++k)
        theta.segment(m - 1 + k * params.l_dim(), params.l_dim()) = params.b.row(k);
    return theta;
}

Parameters embed_vector(const Eigen::VectorXd& theta, int m, int k_dim, int l_dim) {
    if (theta.size() != free_dim(m, k_dim, l_dim))
        throw ValidationError("embed_vector: expected length " +
                              std::to_string(free_dim(m, k_dim, l_dim)) + ", got " +
                              std::to_string(theta.size()));
    if (!theta.allFinite()) throw ValidationError("embed_vector: non-finite entry");
    Parameters p;
    p.delta = Eigen::VectorXd::Zero(m);
    p.delta.tail(m - 1) = theta.head(m - 1);
    p.b.resize(k_dim, l_dim);
    for (int k = 0; k < k_dim; ++k) p.b.row(k) = theta.segment(m - 1 + k * l_dim, l_dim);
    return p;
}

Eigen::MatrixXd agent_jacobian(const Eigen::VectorXd& x, const AlternativeSet& alternatives) {
    const int m = alternatives.count();
    const int l_dim = alternatives.attr_dim();
    const int k_dim = static_cast<int>(x.size());
    const int d = free_dim(m, k_dim, l_dim);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, d);
    for (int j = 1; j < m; ++j) jac(j, j - 1) = 1.0;
    // d mu_j / d B_kl = x_k z_jl
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < k_dim; ++k)
            for (int l = 0; l < l_dim; ++l)
                jac(j, m - 1 + k * l_dim + l) = x[k] * alternatives.z(j, l);
    return jac;
}

Eigen::MatrixXd design_matrix(const AgentPool& agents, const AlternativeSet& alternatives) {
    const int n = agents.count();
    const int m = alternatives.count();
    const int d = free_dim(m, agents.attr_dim(), alternatives.attr_dim());
    Eigen::MatrixXd g(n * m, d);
    for (int i = 0; i < n; ++i)
        g.middleRows(i * m, m) = agent_jacobian(agents.x.row(i), alternatives);
    return g;
}

Eigen::MatrixXd mean_utilities(const Parameters& params, const AlternativeSet& alternatives,
                               const AgentPool& agents) {
    params.validate();
    if (params.m() != alternatives.count())
        throw ValidationError("mean_utilities: delta length != alternative count");
    if (params.k_dim() != agents.attr_dim() || params.l_dim() != alternatives.attr_dim())
        throw ValidationError("mean_utilities: B is " + std::to_string(params.k_dim()) + "x" +
                              std::to_string(params.l_dim()) + " but attributes are K=" +
                              std::to_string(agents.attr_dim()) + ", L=" +
                              std::to_string(alternatives.attr_dim()));
    const int n = agents.count();
    Eigen::MatrixXd mu = (agents.x * params.b) * alternatives.z.transpose(); // n x m
    mu.rowwise() += params.delta.transpose();
    if (n > 0 && !mu.allFinite()) throw ValidationError("mean_utilities: non-finite result");
    return mu;
}

Profile sample_profile(const Parameters& params, const AlternativeSet& alternatives,
                       const AgentPool& agents, const NoiseModel& noise, std::uint64_t seed) {
    noise.validate();
    alternatives.validate();
    agents.validate();
    const Eigen::MatrixXd mu = mean_utilities(params, alternatives, agents);
    const int n = agents.count();
    const int m = alternatives.count();

    Profile profile{alternatives, agents, {}};
    profile.rankings.reserve(static_cast<size_t>(n));
    Rng rng(seed);
    std::vector<double> u(static_cast<size_t>(m));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j)
            u[static_cast<size_t>(j)] = mu(i, j) + noise.sigma * standard_normal(rng);
        Ranking r;
        r.order.resize(static_cast<size_t>(m));
        std::iota(r.order.begin(), r.order.end(), 0);
        // descending utility; index ascending on (probability-zero) ties
        std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
            if (u[static_cast<size_t>(a)] != u[static_cast<size_t>(b)])
                return u[static_cast<size_t>(a)] > u[static_cast<size_t>(b)];
            return a < b;
        });
        profile.rankings.emplace_back(i, std::move(r));
    }
    return profile;
}

double log_prior(const Eigen::VectorXd& theta, const Prior& prior) {
    prior.validate();
    if (prior.kind == PriorKind::flat) return 0.0;
    return -0.5 * prior.lambda * theta.squaredNorm();
}

Eigen::VectorXd log_prior_grad(const Eigen::VectorXd& theta, const Prior& prior) {
    prior.validate();
    if (prior.kind == PriorKind::flat) return Eigen::VectorXd::Zero(theta.size());
    return -prior.lambda * theta;
}

Eigen::MatrixXd log_prior_hess(int d, const Prior& prior) {
    prior.validate();
    if (prior.kind == PriorKind::flat) return Eigen::MatrixXd::Zero(d, d);
    return -prior.lambda * Eigen::MatrixXd::Identity(d, d);
}

} // namespace grum
