#include "grum/fisher.hpp"

#include <algorithm>
#include <numeric>

#include "grum/common.hpp"
#include "grum/model.hpp"
#include "grum/truncnorm.hpp"

namespace grum {

InfoMatrix psd_repair(const InfoMatrix& info, double rel_floor) {
    if (info.rows() != info.cols()) throw ValidationError("psd_repair: matrix not square");
    if (!(rel_floor > 0.0)) throw ValidationError("psd_repair: rel_floor must be > 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        ((info + info.transpose()) / 2.0).eval());
    Eigen::VectorXd ev = es.eigenvalues();
    const double floor = rel_floor * ev[ev.size() - 1];
    ev = ev.cwiseMax(floor);
    InfoMatrix out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    return ((out + out.transpose()) / 2.0).eval();
}

namespace {

// J_pi = G^T G / sigma^2 - E[s s^T | pi] + E[s|pi] E[s|pi]^T. The first term
// is the complete-data information, constant in u for the normal family.
InfoMatrix louis_term(const Eigen::MatrixXd& jac, const AgentMoments& mom,
                      double sigma2) {
    InfoMatrix j = jac.transpose() * jac / sigma2;
    j -= mom.sum_score_outer / static_cast<double>(mom.n_retained);
    j += mom.mean_score * mom.mean_score.transpose();
    return j;
}

} // namespace

InfoMatrix observed_info(const Profile& profile, const Parameters& theta_hat,
                         const NoiseModel& noise, const GibbsConfig& gibbs,
                         const Prior* prior) {
    profile.validate();
    theta_hat.validate();
    noise.validate();
    gibbs.validate();
    if (theta_hat.m() != profile.alternatives.count() ||
        theta_hat.k_dim() != profile.agents.attr_dim() ||
        theta_hat.l_dim() != profile.alternatives.attr_dim())
        throw ValidationError("observed_info: parameter dimensions do not match profile");

    const Eigen::VectorXd theta = free_vector(theta_hat);
    const double sigma2 = noise.sigma * noise.sigma;
    const int d = static_cast<int>(theta.size());
    InfoMatrix total = InfoMatrix::Zero(d, d);
    for (const auto& [agent, ranking] : profile.rankings) {
        const Eigen::MatrixXd jac =
            agent_jacobian(profile.agents.x.row(agent), profile.alternatives);
        GibbsConfig chain = gibbs;
        chain.seed = derive_seed(gibbs.seed, "louis", static_cast<std::uint64_t>(agent));
        const AgentMoments mom = run_chain(ranking, jac * theta, noise, jac / sigma2, chain);
        total += louis_term(jac, mom, sigma2);
    }
    if (prior != nullptr && prior->is_proper()) total.diagonal().array() += prior->lambda;
    return ((total + total.transpose()) / 2.0).eval();
}

InfoMatrix expected_info(const Eigen::VectorXd& design_x, const Parameters& theta_hat,
                         const AlternativeSet& alternatives, const NoiseModel& noise,
                         int n_sim, std::uint64_t seed, const GibbsConfig& chain) {
    theta_hat.validate();
    alternatives.validate();
    noise.validate();
    chain.validate();
    if (n_sim < 1) throw ValidationError("expected_info: n_sim must be >= 1");
    if (design_x.size() != theta_hat.k_dim())
        throw ValidationError("expected_info: design attribute length does not match B rows");
    if (alternatives.attr_dim() != theta_hat.l_dim() ||
        alternatives.count() != theta_hat.m())
        throw ValidationError("expected_info: alternative set does not match parameters");

    const Eigen::MatrixXd jac = agent_jacobian(design_x, alternatives);
    const double sigma2 = noise.sigma * noise.sigma;
    const Eigen::VectorXd mu = jac * free_vector(theta_hat);
    const int m = alternatives.count();
    const int d = static_cast<int>(jac.cols());

    InfoMatrix cov_sum = InfoMatrix::Zero(d, d);
    Eigen::VectorXd u(m);
    Ranking pi;
    pi.order.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < n_sim; ++k) {
        Rng rng(derive_seed(seed, "sim", static_cast<std::uint64_t>(k)));
        for (int j = 0; j < m; ++j) u[j] = mu[j] + noise.sigma * standard_normal(rng);
        std::iota(pi.order.begin(), pi.order.end(), 0);
        std::stable_sort(pi.order.begin(), pi.order.end(),
                         [&](int a, int b) { return u[a] > u[b]; });
        GibbsConfig cfg = chain;
        cfg.seed = derive_seed(seed, "chain", static_cast<std::uint64_t>(k));
        const AgentMoments mom = run_chain(pi, mu, noise, jac / sigma2, cfg);
        cov_sum += mom.sum_score_outer / static_cast<double>(mom.n_retained) -
                   mom.mean_score * mom.mean_score.transpose();
    }
    InfoMatrix info =
        jac.transpose() * jac / sigma2 - cov_sum / static_cast<double>(n_sim);
    return ((info + info.transpose()) / 2.0).eval();
}

} // namespace grum
