#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "grum/elicitation.hpp"
#include "grum/synthetic.hpp"
#include "grum/types.hpp"

namespace grum {

struct ExperimentConfig {
    // Dataset source: synthetic recipe, or recorded CSVs when use_files.
    bool use_files = false;
    SyntheticSpec synthetic;
    std::filesystem::path rankings_path;
    std::filesystem::path agents_path;
    std::filesystem::path alternatives_path;
    std::filesystem::path truth_path; // optional; enables Kendall columns

    NoiseModel noise; // file datasets only; synthetic carries its own
    Prior prior = Prior::gaussian(1.0);
    FitConfig fit;
    std::vector<Criterion> criteria;
    int rounds = 0;
    int initial_count = 5;
    int repeats = 1;
    bool include_prior_in_r = true;
    int select_n_sim = 100;
    GibbsConfig select_chain{.n_samples = 50, .burn_in = 10};
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";

    void validate() const;
};

struct ExperimentResult {
    std::filesystem::path results_path;
    std::filesystem::path diagnostics_path;
    long rows = 0;
};

/// Repeats x criteria elicitation runs. Every repeat draws a fresh synthetic
/// dataset (or reuses the loaded files) and all criteria within a repeat
/// share one run seed, so they start from the same initial query set and are
/// compared pairwise. Emits results.csv
/// (seed,criterion,round,queried_agent,kendall_social,kendall_personal_mean,
/// criterion_value,logpost_estimate) and diagnostics.csv; reruns with the
/// same config are byte-identical.
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace grum
