#include "grum/experiment.hpp"

#include <sstream>

#include "grum/common.hpp"
#include "grum/evaluation.hpp"
#include "grum/io.hpp"

namespace grum {

void ExperimentConfig::validate() const {
    if (criteria.empty()) throw ValidationError("experiment: need at least one criterion");
    for (const auto& c : criteria) {
        // a bare personal_cv is allowed here: the runner fills target_sample
        // with the recorded agent designs before each elicitation
        if (c.kind == CriterionKind::personal_cv && !c.target_x && c.target_sample.empty())
            continue;
        c.validate();
    }
    if (!use_files) synthetic.validate();
    noise.validate();
    prior.validate();
    fit.validate();
    if (rounds < 0) throw ValidationError("experiment: rounds must be >= 0");
    if (initial_count < 1) throw ValidationError("experiment: initial_count must be >= 1");
    if (repeats < 1) throw ValidationError("experiment: repeats must be >= 1");
    if (select_n_sim < 1) throw ValidationError("experiment: select_n_sim must be >= 1");
    select_chain.validate();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    std::optional<Profile> file_profile;
    std::optional<Parameters> file_truth;
    if (config.use_files) {
        file_profile = load_profile(config.rankings_path, config.agents_path,
                                    config.alternatives_path);
        if (!config.truth_path.empty()) file_truth = load_parameters(config.truth_path);
    }

    std::ostringstream results;
    results << "seed,criterion,round,queried_agent,kendall_social,"
               "kendall_personal_mean,criterion_value,logpost_estimate\n";
    std::ostringstream diagnostics;
    diagnostics << "seed,condition1_ok,identifiable,design_rank,d\n";

    long rows = 0;
    for (int rep = 0; rep < config.repeats; ++rep) {
        Profile profile;
        std::optional<Parameters> truth;
        NoiseModel noise = config.noise;
        if (config.use_files) {
            profile = *file_profile;
            truth = file_truth;
        } else {
            SyntheticSpec spec = config.synthetic;
            spec.seed = derive_seed(config.seed, "data", static_cast<std::uint64_t>(rep));
            SyntheticData data = generate_synthetic(spec);
            profile = std::move(data.profile);
            truth = std::move(data.truth);
            noise = data.noise;
        }

        const DiagnosticsReport report = run_diagnostics(profile);
        diagnostics << rep << ',' << (report.condition1_ok ? 1 : 0) << ','
                    << (report.identifiable ? 1 : 0) << ',' << report.design_rank << ','
                    << report.d << "\n";

        for (const auto& criterion : config.criteria) {
            Criterion crit = criterion;
            // The population realization of the per-agent criterion: average
            // it over every recorded design.
            if (crit.kind == CriterionKind::personal_cv && !crit.target_x &&
                crit.target_sample.empty())
                for (int i = 0; i < profile.num_agents(); ++i)
                    crit.target_sample.emplace_back(profile.agents.x.row(i).transpose());

            ElicitationOptions opts;
            opts.rounds = config.rounds;
            opts.initial_count = config.initial_count;
            opts.fit = config.fit;
            opts.prior = config.prior;
            opts.noise = noise;
            opts.include_prior_in_r = config.include_prior_in_r;
            opts.select_n_sim = config.select_n_sim;
            opts.select_chain = config.select_chain;
            opts.truth = truth;
            opts.seed = derive_seed(config.seed, "rep", static_cast<std::uint64_t>(rep));

            const ElicitationTrace trace = run_elicitation(profile, crit, opts);
            for (const auto& row : trace.rows) {
                results << rep << ',' << to_string(crit.kind) << ',' << row.round << ','
                        << row.queried_agent << ',' << format_double(row.kendall_social)
                        << ',' << format_double(row.kendall_personal_mean) << ','
                        << format_double(row.criterion_value) << ','
                        << format_double(row.logpost) << "\n";
                ++rows;
            }
        }
    }

    std::filesystem::create_directories(config.out_dir);
    ExperimentResult out;
    out.results_path = config.out_dir / "results.csv";
    out.diagnostics_path = config.out_dir / "diagnostics.csv";
    out.rows = rows;
    write_text_atomic(out.results_path, results.str());
    write_text_atomic(out.diagnostics_path, diagnostics.str());
    return out;
}

} // namespace grum
