#include "grum/gibbs.hpp"

#include <algorithm>
#include <limits>

#include "grum/common.hpp"
#include "grum/truncnorm.hpp"

namespace grum {

void GibbsConfig::validate() const {
    if (n_samples < 1) throw ValidationError("gibbs n_samples must be >= 1");
    if (burn_in < 0) throw ValidationError("gibbs burn_in must be >= 0");
    if (thin < 1) throw ValidationError("gibbs thin must be >= 1");
}

AgentMoments run_chain(const Ranking& ranking, const Eigen::VectorXd& mu_row,
                       const NoiseModel& noise, const Eigen::MatrixXd& grad_eta,
                       const GibbsConfig& config,
                       std::vector<Eigen::VectorXd>* retained) {
    config.validate();
    noise.validate();
    const int m = static_cast<int>(mu_row.size());
    ranking.validate(m);
    if (grad_eta.rows() != m)
        throw ValidationError("grad_eta row count does not match alternative count");

    const double inf = std::numeric_limits<double>::infinity();
    const double sigma = noise.sigma;
    const auto& pi = ranking.order;

    // Feasible start: place the j-th ranked site at the j-th largest mean,
    // spaced one unit apart so the order constraint holds strictly.
    Eigen::VectorXd mu_sorted = mu_row;
    std::sort(mu_sorted.data(), mu_sorted.data() + m, std::greater<double>());
    Eigen::VectorXd u(m);
    for (int j = 0; j < m; ++j) u[pi[j]] = mu_sorted[j] + static_cast<double>(m - 1 - j);

    const int d = static_cast<int>(grad_eta.cols());
    AgentMoments mom;
    mom.s = Eigen::VectorXd::Zero(m);
    mom.mean_score = Eigen::VectorXd::Zero(d);
    mom.sum_score_outer = Eigen::MatrixXd::Zero(d, d);

    Rng rng(config.seed);
    Eigen::VectorXd score(d);
    const int total_sweeps = config.burn_in + (config.n_samples - 1) * config.thin + 1;
    for (int sweep = 0; sweep < total_sweeps; ++sweep) {
        for (int j = 0; j < m; ++j) {
            const double upper = j == 0 ? inf : u[pi[j - 1]];
            const double lower = j == m - 1 ? -inf : u[pi[j + 1]];
            u[pi[j]] = sample_truncated_normal(mu_row[pi[j]], sigma, lower, upper, rng);
        }
        if (sweep < config.burn_in || (sweep - config.burn_in) % config.thin != 0) continue;
        if (retained) retained->push_back(u);
        mom.s += u;
        score.noalias() = grad_eta.transpose() * (u - mu_row);
        mom.mean_score += score;
        mom.sum_score_outer.selfadjointView<Eigen::Lower>().rankUpdate(score);
        ++mom.n_retained;
    }

    mom.s /= static_cast<double>(mom.n_retained);
    mom.mean_score /= static_cast<double>(mom.n_retained);
    mom.sum_score_outer.triangularView<Eigen::StrictlyUpper>() =
        mom.sum_score_outer.transpose();
    return mom;
}

} // namespace grum
