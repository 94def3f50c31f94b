#include "grum/mcem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "grum/common.hpp"
#include "grum/model.hpp"
#include "grum/truncnorm.hpp"

namespace grum {

void FitConfig::validate() const {
    if (max_iters < 1) throw ValidationError("fit max_iters must be >= 1");
    gibbs.validate();
    if (newton_steps < 1) throw ValidationError("fit newton_steps must be >= 1");
    if (!(newton_damping > 0.0 && newton_damping <= 1.0))
        throw ValidationError("fit newton_damping must be in (0, 1]");
    if (!(convergence_tol > 0.0)) throw ValidationError("fit convergence_tol must be > 0");
    if (monitor_reps < 2) throw ValidationError("fit monitor_reps must be >= 2");
}

namespace {

void check_model_dims(const Profile& profile, const Parameters& params) {
    if (params.m() != profile.alternatives.count())
        throw ValidationError("parameter delta length does not match alternative count");
    if (params.k_dim() != profile.agents.attr_dim())
        throw ValidationError("parameter B row count does not match agent attribute width");
    if (params.l_dim() != profile.alternatives.attr_dim())
        throw ValidationError("parameter B column count does not match alternative attribute width");
}

void check_moment_dims(const std::vector<AgentMoments>& moments, const Profile& profile,
                       int d) {
    if (moments.size() != profile.rankings.size())
        throw ValidationError("moments list length does not match ranking count");
    const int m = profile.alternatives.count();
    for (const auto& mom : moments) {
        if (mom.s.size() != m || mom.mean_score.size() != d)
            throw ValidationError("moment dimensions do not match the model");
        if (mom.n_retained < 1) throw ValidationError("moments carry no retained samples");
    }
}

} // namespace

std::vector<AgentMoments> e_step(const Profile& profile, const Parameters& params_t,
                                 const NoiseModel& noise, const GibbsConfig& gibbs,
                                 int iteration) {
    profile.validate();
    params_t.validate();
    noise.validate();
    gibbs.validate();
    check_model_dims(profile, params_t);

    const Eigen::VectorXd theta = free_vector(params_t);
    const double sigma2 = noise.sigma * noise.sigma;
    std::vector<AgentMoments> moments;
    moments.reserve(profile.rankings.size());
    for (const auto& [agent, ranking] : profile.rankings) {
        const Eigen::MatrixXd jac =
            agent_jacobian(profile.agents.x.row(agent), profile.alternatives);
        const Eigen::VectorXd mu = jac * theta;
        GibbsConfig chain = gibbs;
        chain.seed = derive_seed(gibbs.seed, "estep", static_cast<std::uint64_t>(agent),
                                 static_cast<std::uint64_t>(iteration));
        moments.push_back(run_chain(ranking, mu, noise, jac / sigma2, chain));
    }
    return moments;
}

Parameters m_step(const std::vector<AgentMoments>& moments, const Parameters& params_t,
                  const Profile& profile, const Prior& prior, const NoiseModel& noise,
                  const FitConfig& config) {
    profile.validate();
    params_t.validate();
    prior.validate();
    noise.validate();
    config.validate();
    check_model_dims(profile, params_t);
    const int d = free_dim(params_t.m(), params_t.k_dim(), params_t.l_dim());
    check_moment_dims(moments, profile, d);

    const double sigma2 = noise.sigma * noise.sigma;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d); // negated surrogate Hessian
    Eigen::VectorXd gs = Eigen::VectorXd::Zero(d);
    for (std::size_t idx = 0; idx < moments.size(); ++idx) {
        const int agent = profile.rankings[idx].first;
        const Eigen::MatrixXd jac =
            agent_jacobian(profile.agents.x.row(agent), profile.alternatives);
        h.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
        gs.noalias() += jac.transpose() * moments[idx].s;
    }
    h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
    h /= sigma2;
    gs /= sigma2;
    if (prior.is_proper()) h.diagonal().array() += prior.lambda;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double floor = 1e-10 * std::max(1.0, ev[d - 1]);
    if (ev[0] <= floor) {
        int rank = 0;
        for (int i = 0; i < d; ++i)
            if (ev[i] > floor) ++rank;
        std::ostringstream msg;
        msg << "m_step: surrogate Hessian is singular under a flat prior (rank " << rank
            << " of " << d << "); the design does not identify the free parameters";
        throw NumericalError(msg.str());
    }

    Eigen::VectorXd theta = free_vector(params_t);
    for (int step = 0; step < config.newton_steps; ++step) {
        const Eigen::VectorXd grad = gs - h * theta;
        const Eigen::VectorXd dir =
            es.eigenvectors() *
            (es.eigenvectors().transpose() * grad).cwiseQuotient(ev).eval();
        theta += config.newton_damping * dir;
    }
    return embed_vector(theta, params_t.m(), params_t.k_dim(), params_t.l_dim());
}

double surrogate_q(const Parameters& theta, const std::vector<AgentMoments>& moments,
                   const Profile& profile, const NoiseModel& noise, const Prior& prior) {
    profile.validate();
    theta.validate();
    noise.validate();
    prior.validate();
    check_model_dims(profile, theta);
    const int d = free_dim(theta.m(), theta.k_dim(), theta.l_dim());
    check_moment_dims(moments, profile, d);

    const Eigen::VectorXd tf = free_vector(theta);
    const double sigma2 = noise.sigma * noise.sigma;
    double q = 0.0;
    for (std::size_t idx = 0; idx < moments.size(); ++idx) {
        const int agent = profile.rankings[idx].first;
        const Eigen::VectorXd mu =
            agent_jacobian(profile.agents.x.row(agent), profile.alternatives) * tf;
        q += (mu.dot(moments[idx].s) - 0.5 * mu.squaredNorm()) / sigma2;
    }
    return q + log_prior(tf, prior);
}

LogPostEstimate estimate_log_posterior(const Profile& profile, const Parameters& params,
                                       const Prior& prior, const NoiseModel& noise,
                                       int reps, std::uint64_t seed) {
    profile.validate();
    params.validate();
    prior.validate();
    noise.validate();
    check_model_dims(profile, params);
    if (reps < 2) throw ValidationError("log-posterior estimate needs reps >= 2");

    const double inf = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd theta = free_vector(params);
    LogPostEstimate est;
    est.value = log_prior(theta, prior);
    double var_sum = 0.0;
    for (const auto& [agent, ranking] : profile.rankings) {
        const Eigen::VectorXd mu =
            agent_jacobian(profile.agents.x.row(agent), profile.alternatives) * theta;
        const auto& pi = ranking.order;
        const int m = ranking.size();
        Rng rng(derive_seed(seed, "ghk", static_cast<std::uint64_t>(agent)));
        double mean = 0.0, m2 = 0.0;
        for (int r = 0; r < reps; ++r) {
            double w = 1.0;
            double u_prev = mu[pi[0]] + noise.sigma * standard_normal(rng);
            for (int j = 1; j < m; ++j) {
                w *= norm_cdf((u_prev - mu[pi[j]]) / noise.sigma);
                if (j + 1 < m)
                    u_prev = sample_truncated_normal(mu[pi[j]], noise.sigma, -inf, u_prev, rng);
            }
            const double delta = w - mean;
            mean += delta / static_cast<double>(r + 1);
            m2 += delta * (w - mean);
        }
        est.value += std::log(mean);
        const double var = m2 / static_cast<double>(reps - 1);
        var_sum += var / (static_cast<double>(reps) * mean * mean);
    }
    est.se = std::sqrt(var_sum);
    return est;
}

FitResult fit_map(const Profile& profile, const Prior& prior, const NoiseModel& noise,
                  const FitConfig& config) {
    profile.validate();
    prior.validate();
    noise.validate();
    config.validate();
    if (profile.rankings.empty()) throw ValidationError("fit_map: profile has no rankings");

    FitResult result;
    result.diagnostics = run_diagnostics(profile);
    if (!result.diagnostics.condition1_ok || !result.diagnostics.identifiable) {
        std::ostringstream what;
        if (!result.diagnostics.condition1_ok) {
            what << "no ranking places any of {";
            for (std::size_t i = 0; i < result.diagnostics.witness_c1.size(); ++i)
                what << (i ? "," : "") << result.diagnostics.witness_c1[i];
            what << "} above any of {";
            for (std::size_t i = 0; i < result.diagnostics.witness_c2.size(); ++i)
                what << (i ? "," : "") << result.diagnostics.witness_c2[i];
            what << "}";
        }
        if (!result.diagnostics.identifiable) {
            if (!result.diagnostics.condition1_ok) what << "; ";
            what << "design rank " << result.diagnostics.design_rank << " < "
                 << result.diagnostics.d;
        }
        if (!prior.is_proper())
            throw NumericalError("fit_map: posterior unbounded under a flat prior (" +
                                 what.str() + ")");
        result.warnings.push_back("posterior bounded only by the gaussian prior: " +
                                  what.str());
    }

    const int m = profile.alternatives.count();
    const int k_dim = profile.agents.attr_dim();
    const int l_dim = profile.alternatives.attr_dim();
    const int d = free_dim(m, k_dim, l_dim);
    Parameters params = embed_vector(Eigen::VectorXd::Zero(d), m, k_dim, l_dim);
    const std::uint64_t monitor_seed = derive_seed(config.seed, "monitor");

    for (int t = 0; t < config.max_iters; ++t) {
        std::vector<AgentMoments> moments = e_step(profile, params, noise, config.gibbs, t);
        IterationRecord rec;
        rec.q_before = surrogate_q(params, moments, profile, noise, prior);
        Parameters next = m_step(moments, params, profile, prior, noise, config);
        rec.q_after = surrogate_q(next, moments, profile, noise, prior);
        rec.theta = free_vector(next);
        if (config.monitor_logpost) {
            const LogPostEstimate lp = estimate_log_posterior(
                profile, next, prior, noise, config.monitor_reps, monitor_seed);
            rec.logpost = lp.value;
            rec.logpost_se = lp.se;
        }
        const double step_inf =
            (free_vector(next) - free_vector(params)).lpNorm<Eigen::Infinity>();
        params = std::move(next);
        result.trace.push_back(std::move(rec));
        result.moments = std::move(moments);
        if (step_inf < config.convergence_tol) break;
    }
    result.theta_hat = std::move(params);
    return result;
}

} // namespace grum
