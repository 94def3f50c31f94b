#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grum/fisher.hpp"
#include "grum/mcem.hpp"
#include "grum/types.hpp"

namespace grum {

enum class CriterionKind { random, d_optimality, e_optimality, social_cv, personal_cv };

CriterionKind parse_criterion_kind(const std::string& name);
std::string to_string(CriterionKind kind);

struct Criterion {
    CriterionKind kind = CriterionKind::random;
    std::optional<Eigen::VectorXd> target_x;           // personal_cv: single design
    std::vector<Eigen::VectorXd> target_sample;        // personal_cv: average over designs
    void validate() const;
};

struct DesignPool {
    std::vector<std::pair<int, Eigen::VectorXd>> entries; // (agent index, attributes)
};

/// Score a candidate posterior with precision R + I_h.
///   d_optimality: log det, e_optimality: smallest eigenvalue,
///   social_cv: min over alternative pairs of |delta_j1 - delta_j2| / std of
///   that difference under Sigma = (R + I_h)^{-1} (delta_0 pinned at zero
///   variance), personal_cv: same over mu_j(x), random: uniform draw from rng.
double criterion_value(const Criterion& criterion, const Parameters& theta_hat,
                       const AlternativeSet& alternatives, const InfoMatrix& r,
                       const InfoMatrix& i_h, Rng* rng = nullptr);

using InfoProvider = std::function<InfoMatrix(const Eigen::VectorXd&)>;

/// Maximize criterion_value over the pool with I_h = info_provider(x).
/// Ties go to the lowest agent index; the random criterion draws an entry
/// directly and never calls the provider.
std::pair<int, double> select_design(const DesignPool& pool, const Parameters& theta_hat,
                                     const AlternativeSet& alternatives, const InfoMatrix& r,
                                     const Criterion& criterion,
                                     const InfoProvider& info_provider, std::uint64_t seed);

struct TraceRow {
    int round = 0;          // 0 is the initial fit, queries start at 1
    int queried_agent = -1; // -1 on round 0
    double criterion_value = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd theta;
    double kendall_social = std::numeric_limits<double>::quiet_NaN();
    double kendall_personal_mean = std::numeric_limits<double>::quiet_NaN();
    double logpost = std::numeric_limits<double>::quiet_NaN();
    double logpost_se = std::numeric_limits<double>::quiet_NaN();
};

struct ElicitationTrace {
    Criterion criterion;
    std::vector<int> initial_agents;
    std::vector<TraceRow> rows; // rounds + 1 entries
    std::vector<std::string> warnings;
};

struct ElicitationOptions {
    int rounds = 0;
    int initial_count = 5;
    FitConfig fit;
    Prior prior = Prior::gaussian(1.0);
    NoiseModel noise;
    // Algorithm step 2 sets R from the observed information of the queried
    // data; with a proper prior its precision can be folded in as well.
    bool include_prior_in_r = true;
    // Lighter Monte-Carlo settings for the per-candidate I_h evaluations,
    // which dominate the cost of a round.
    int select_n_sim = 100;
    GibbsConfig select_chain{.n_samples = 50, .burn_in = 10};
    std::optional<Parameters> truth; // enables the Kendall columns
    std::uint64_t seed = 0;

    void validate() const;
};

/// One full adaptive run against recorded rankings: fit on a random initial
/// set, then per round compute R, pick the pool design maximizing the
/// criterion, reveal that agent's recorded ranking, and refit. Candidate
/// evaluations within a round share one derived seed, so candidates are
/// compared under common random numbers.
ElicitationTrace run_elicitation(const Profile& full_profile, const Criterion& criterion,
                                 const ElicitationOptions& options);

} // namespace grum
