#pragma once

// Independent oracles shared by the test binaries: rejection sampling for
// order-constrained moments, finite differences, exhaustive bipartition
// checking, and a generic quadratic maximizer. None of them reuse library
// internals beyond the public data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "grum/types.hpp"

namespace oracle {

struct RejectionMoments {
    Eigen::VectorXd mean; // E[u | argsort-desc(u) == ranking]
    Eigen::VectorXd se;
    long kept = 0;
};

inline RejectionMoments rejection_moments(const Eigen::VectorXd& mu, double sigma,
                                          const std::vector<int>& ranking, long n_draws,
                                          std::uint64_t seed) {
    const int m = static_cast<int>(mu.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(m);
    long kept = 0;
    Eigen::VectorXd u(m);
    std::vector<int> order(static_cast<std::size_t>(m));
    for (long t = 0; t < n_draws; ++t) {
        for (int j = 0; j < m; ++j) u[j] = mu[j] + sigma * gauss(rng);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return u[a] > u[b]; });
        if (order != ranking) continue;
        sum += u;
        sum_sq += u.cwiseProduct(u);
        ++kept;
    }
    RejectionMoments out;
    out.kept = kept;
    if (kept > 1) {
        out.mean = sum / static_cast<double>(kept);
        const Eigen::VectorXd var =
            (sum_sq - sum.cwiseProduct(sum) / static_cast<double>(kept)) /
            static_cast<double>(kept - 1);
        out.se = (var / static_cast<double>(kept)).cwiseSqrt();
    }
    return out;
}

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h = 1e-4) {
    const Eigen::Index d = x.size();
    Eigen::MatrixXd hess(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
            pp[i] += h;
            pp[j] += h;
            pm[i] += h;
            pm[j] -= h;
            mp[i] -= h;
            mp[j] += h;
            mm[i] -= h;
            mm[j] -= h;
            hess(i, j) = hess(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
        }
    return hess;
}

/// Exact maximizer of a quadratic via one Newton step from x0 using finite
/// differences only.
inline Eigen::VectorXd maximize_quadratic(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
    double h = 1e-4) {
    const Eigen::VectorXd g = fd_gradient(f, x0, h);
    const Eigen::MatrixXd hess = fd_hessian(f, x0, h);
    return x0 - hess.ldlt().solve(g);
}

/// Literal bipartition enumeration: for every split of the alternatives into
/// nonempty c1, c2, some ranking must place a member of c1 above a member of
/// c2. m <= 20 masks.
inline bool condition1_exhaustive(const grum::Profile& profile) {
    const int m = profile.num_alternatives();
    std::vector<std::vector<bool>> beats(static_cast<std::size_t>(m),
                                         std::vector<bool>(static_cast<std::size_t>(m), false));
    for (const auto& [agent, ranking] : profile.rankings) {
        (void)agent;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                beats[static_cast<std::size_t>(ranking.order[static_cast<std::size_t>(a)])]
                     [static_cast<std::size_t>(ranking.order[static_cast<std::size_t>(b)])] = true;
    }
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
        bool crossed = false;
        for (int c1 = 0; c1 < m && !crossed; ++c1) {
            if (!(mask & (1u << c1))) continue;
            for (int c2 = 0; c2 < m; ++c2)
                if (!(mask & (1u << c2)) && beats[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)]) {
                    crossed = true;
                    break;
                }
        }
        if (!crossed) return false;
    }
    return true;
}

inline grum::AlternativeSet plain_alternatives(int m) {
    return grum::AlternativeSet{Eigen::MatrixXd(m, 0)};
}

inline grum::AgentPool plain_agents(int n) { return grum::AgentPool{Eigen::MatrixXd(n, 0)}; }

inline grum::Ranking make_ranking(std::vector<int> order) {
    grum::Ranking r;
    r.order = std::move(order);
    return r;
}

inline grum::Parameters delta_only(std::vector<double> delta) {
    grum::Parameters p;
    p.delta = Eigen::Map<Eigen::VectorXd>(delta.data(), static_cast<Eigen::Index>(delta.size()));
    p.b.resize(0, 0);
    return p;
}

} // namespace oracle
