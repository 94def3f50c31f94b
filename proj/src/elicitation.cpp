#include "grum/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "grum/common.hpp"
#include "grum/evaluation.hpp"
#include "grum/model.hpp"

namespace grum {

CriterionKind parse_criterion_kind(const std::string& name) {
    if (name == "random") return CriterionKind::random;
    if (name == "d_optimality") return CriterionKind::d_optimality;
    if (name == "e_optimality") return CriterionKind::e_optimality;
    if (name == "social_cv") return CriterionKind::social_cv;
    if (name == "personal_cv") return CriterionKind::personal_cv;
    throw ValidationError("unknown criterion: " + name);
}

std::string to_string(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::random: return "random";
        case CriterionKind::d_optimality: return "d_optimality";
        case CriterionKind::e_optimality: return "e_optimality";
        case CriterionKind::social_cv: return "social_cv";
        case CriterionKind::personal_cv: return "personal_cv";
    }
    throw ValidationError("unknown criterion kind");
}

void Criterion::validate() const {
    if (kind == CriterionKind::personal_cv && !target_x.has_value() && target_sample.empty())
        throw ValidationError("personal_cv criterion needs target_x or target_sample");
    if (target_x && !target_x->allFinite())
        throw ValidationError("criterion target_x has non-finite entries");
    for (const auto& x : target_sample)
        if (!x.allFinite()) throw ValidationError("criterion target_sample has non-finite entries");
}

namespace {

double min_pairwise_cv(const Eigen::MatrixXd& jac, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& sigma_cov) {
    const Eigen::VectorXd mu = jac * theta;
    const int m = static_cast<int>(jac.rows());
    double best = std::numeric_limits<double>::infinity();
    for (int j1 = 0; j1 < m; ++j1)
        for (int j2 = j1 + 1; j2 < m; ++j2) {
            const Eigen::VectorXd a = (jac.row(j1) - jac.row(j2)).transpose();
            const double var = a.dot(sigma_cov * a);
            best = std::min(best, std::abs(mu[j1] - mu[j2]) / std::sqrt(var));
        }
    return best;
}

} // namespace

double criterion_value(const Criterion& criterion, const Parameters& theta_hat,
                       const AlternativeSet& alternatives, const InfoMatrix& r,
                       const InfoMatrix& i_h, Rng* rng) {
    criterion.validate();
    if (criterion.kind == CriterionKind::random) {
        if (rng == nullptr)
            throw ValidationError("random criterion needs a generator");
        return uniform_open(*rng);
    }
    theta_hat.validate();
    alternatives.validate();
    if (alternatives.count() != theta_hat.m() ||
        alternatives.attr_dim() != theta_hat.l_dim())
        throw ValidationError("criterion_value: alternative set does not match parameters");
    const int d = free_dim(theta_hat.m(), theta_hat.k_dim(), theta_hat.l_dim());
    if (r.rows() != d || r.cols() != d || i_h.rows() != d || i_h.cols() != d)
        throw ValidationError("criterion_value: information matrices are not d x d");

    const InfoMatrix total = psd_repair(r + i_h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(total);
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev[0] <= 0.0)
        throw NumericalError("criterion_value: R + I_h is singular after repair");

    switch (criterion.kind) {
        case CriterionKind::d_optimality:
            return ev.array().log().sum();
        case CriterionKind::e_optimality:
            return ev[0];
        default:
            break;
    }

    const Eigen::MatrixXd sigma_cov = es.eigenvectors() *
                                      ev.cwiseInverse().asDiagonal() *
                                      es.eigenvectors().transpose();
    const Eigen::VectorXd theta = free_vector(theta_hat);
    if (criterion.kind == CriterionKind::social_cv) {
        const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(theta_hat.k_dim());
        return min_pairwise_cv(agent_jacobian(x0, alternatives), theta, sigma_cov);
    }
    std::vector<Eigen::VectorXd> targets = criterion.target_sample;
    if (targets.empty()) targets.push_back(*criterion.target_x);
    double acc = 0.0;
    for (const auto& x : targets) {
        if (x.size() != theta_hat.k_dim())
            throw ValidationError("criterion_value: target attribute length does not match B rows");
        acc += min_pairwise_cv(agent_jacobian(x, alternatives), theta, sigma_cov);
    }
    return acc / static_cast<double>(targets.size());
}

std::pair<int, double> select_design(const DesignPool& pool, const Parameters& theta_hat,
                                     const AlternativeSet& alternatives, const InfoMatrix& r,
                                     const Criterion& criterion,
                                     const InfoProvider& info_provider, std::uint64_t seed) {
    if (pool.entries.empty()) throw ValidationError("select_design: pool is empty");
    criterion.validate();
    if (criterion.kind == CriterionKind::random) {
        Rng rng(seed);
        const double draw = uniform_open(rng);
        const auto idx = std::min(pool.entries.size() - 1,
                                  static_cast<std::size_t>(draw * pool.entries.size()));
        return {pool.entries[idx].first, draw};
    }
    int best_agent = -1;
    double best = 0.0;
    bool have = false;
    for (const auto& [agent, x] : pool.entries) {
        const double value =
            criterion_value(criterion, theta_hat, alternatives, r, info_provider(x), nullptr);
        if (!have || value > best || (value == best && agent < best_agent)) {
            have = true;
            best = value;
            best_agent = agent;
        }
    }
    return {best_agent, best};
}

void ElicitationOptions::validate() const {
    if (rounds < 0) throw ValidationError("elicitation rounds must be >= 0");
    if (initial_count < 1) throw ValidationError("elicitation initial_count must be >= 1");
    fit.validate();
    prior.validate();
    noise.validate();
    if (select_n_sim < 1) throw ValidationError("elicitation select_n_sim must be >= 1");
    select_chain.validate();
    if (truth) truth->validate();
}

ElicitationTrace run_elicitation(const Profile& full_profile, const Criterion& criterion,
                                 const ElicitationOptions& options) {
    full_profile.validate();
    criterion.validate();
    options.validate();
    const int n = static_cast<int>(full_profile.rankings.size());
    if (n == 0) throw ValidationError("run_elicitation: profile has no rankings");
    if (options.initial_count + options.rounds > n)
        throw ValidationError("run_elicitation: initial_count + rounds exceeds recorded rankings");
    if (options.truth &&
        (options.truth->m() != full_profile.alternatives.count() ||
         options.truth->k_dim() != full_profile.agents.attr_dim() ||
         options.truth->l_dim() != full_profile.alternatives.attr_dim()))
        throw ValidationError("run_elicitation: truth dimensions do not match profile");

    const AlternativeSet& alts = full_profile.alternatives;
    const int pool_n = full_profile.agents.count();

    ElicitationTrace trace;
    trace.criterion = criterion;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng init_rng(derive_seed(options.seed, "init"));
    for (int i = 0; i < options.initial_count; ++i) {
        const int span = n - i;
        const int j =
            i + std::min(span - 1, static_cast<int>(uniform_open(init_rng) * span));
        std::swap(order[i], order[j]);
    }
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    std::vector<int> initial(order.begin(), order.begin() + options.initial_count);
    std::sort(initial.begin(), initial.end());

    Profile data;
    data.alternatives = full_profile.alternatives;
    data.agents = full_profile.agents;
    for (int idx : initial) {
        taken[static_cast<std::size_t>(idx)] = 1;
        data.rankings.push_back(full_profile.rankings[static_cast<std::size_t>(idx)]);
        trace.initial_agents.push_back(full_profile.rankings[static_cast<std::size_t>(idx)].first);
    }
    std::map<int, int> agent_to_idx;
    for (int i = 0; i < n; ++i)
        agent_to_idx[full_profile.rankings[static_cast<std::size_t>(i)].first] = i;

    auto note_warnings = [&](const std::vector<std::string>& ws) {
        for (const auto& w : ws)
            if (std::find(trace.warnings.begin(), trace.warnings.end(), w) ==
                trace.warnings.end())
                trace.warnings.push_back(w);
    };
    auto refit = [&](int round) {
        FitConfig fc = options.fit;
        const std::uint64_t s = derive_seed(options.seed, "fit", static_cast<std::uint64_t>(round));
        fc.seed = s;
        fc.gibbs.seed = s;
        FitResult fr = fit_map(data, options.prior, options.noise, fc);
        note_warnings(fr.warnings);
        return fr;
    };
    auto fill_metrics = [&](const Parameters& th, TraceRow& row, int round) {
        row.theta = free_vector(th);
        if (options.truth) {
            row.kendall_social =
                kendall_tau(social_ranking(th), social_ranking(*options.truth));
            double acc = 0.0;
            for (int i = 0; i < pool_n; ++i) {
                const Eigen::VectorXd x = full_profile.agents.x.row(i);
                acc += kendall_tau(personalized_ranking(th, x, alts),
                                   personalized_ranking(*options.truth, x, alts));
            }
            row.kendall_personal_mean = acc / static_cast<double>(pool_n);
        }
        const LogPostEstimate lp = estimate_log_posterior(
            data, th, options.prior, options.noise, options.fit.monitor_reps,
            derive_seed(options.seed, "lp", static_cast<std::uint64_t>(round)));
        row.logpost = lp.value;
        row.logpost_se = lp.se;
    };

    FitResult fit = refit(0);
    TraceRow row0;
    row0.round = 0;
    fill_metrics(fit.theta_hat, row0, 0);
    trace.rows.push_back(std::move(row0));

    for (int round = 1; round <= options.rounds; ++round) {
        GibbsConfig obs = options.fit.gibbs;
        obs.seed = derive_seed(options.seed, "obsinfo", static_cast<std::uint64_t>(round));
        const Prior* r_prior =
            options.include_prior_in_r && options.prior.is_proper() ? &options.prior : nullptr;
        const InfoMatrix r_mat = observed_info(data, fit.theta_hat, options.noise, obs, r_prior);

        DesignPool pool;
        for (int i = 0; i < n; ++i) {
            if (taken[static_cast<std::size_t>(i)]) continue;
            const int agent = full_profile.rankings[static_cast<std::size_t>(i)].first;
            pool.entries.emplace_back(agent, full_profile.agents.x.row(agent).transpose());
        }

        const std::uint64_t ih_seed = derive_seed(options.seed, "ih", static_cast<std::uint64_t>(round));
        const Parameters theta_now = fit.theta_hat;
        const InfoProvider provider = [&](const Eigen::VectorXd& x) {
            return expected_info(x, theta_now, alts, options.noise, options.select_n_sim,
                                 ih_seed, options.select_chain);
        };
        const auto [agent, value] =
            select_design(pool, fit.theta_hat, alts, r_mat, criterion, provider,
                          derive_seed(options.seed, "select", static_cast<std::uint64_t>(round)));

        const int idx = agent_to_idx.at(agent);
        taken[static_cast<std::size_t>(idx)] = 1;
        data.rankings.push_back(full_profile.rankings[static_cast<std::size_t>(idx)]);

        fit = refit(round);
        TraceRow row;
        row.round = round;
        row.queried_agent = agent;
        row.criterion_value = value;
        fill_metrics(fit.theta_hat, row, round);
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

} // namespace grum
