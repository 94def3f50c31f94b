#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grum/common.hpp"
#include "grum/elicitation.hpp"
#include "grum/evaluation.hpp"
#include "grum/experiment.hpp"
#include "grum/fisher.hpp"
#include "grum/io.hpp"
#include "grum/mcem.hpp"
#include "grum/model.hpp"
#include "grum/synthetic.hpp"
#include "grum/truncnorm.hpp"

namespace fs = std::filesystem;
using namespace grum;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    fs::path out = ".";
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--seed", common.seed, "master seed; all randomness derives from it");
    cmd->add_option("--out", common.out, "output directory");
    cmd->set_config("--config", "", "flat key=value file mirroring the flags");
}

void add_synthetic(CLI::App* cmd, SyntheticSpec& spec, std::string& preset) {
    cmd->add_option("--preset", preset, "dataset1 | dataset2")
        ->check(CLI::IsMember({"", "dataset1", "dataset2"}));
    cmd->add_option("--n", spec.n, "number of agents");
    cmd->add_option("--m", spec.m, "number of alternatives");
    cmd->add_option("--K", spec.k_dim, "agent attribute dimension");
    cmd->add_option("--L", spec.l_dim, "alternative attribute dimension");
    cmd->add_option("--delta-scale", spec.delta_scale, "scale on intrinsic utilities");
    cmd->add_option("--delta-mean", spec.delta_mean, "pre-scale mean of intrinsic utilities");
    cmd->add_option("--delta-sd", spec.delta_sd, "pre-scale sd of intrinsic utilities");
    cmd->add_option("--b-sd", spec.b_sd, "sd of interaction entries");
    cmd->add_option("--x-sd", spec.x_sd, "sd of agent attributes");
    cmd->add_option("--z-sd", spec.z_sd, "sd of alternative attributes");
    cmd->add_option("--noise-sd", spec.noise_sd, "sd of the utility noise");
}

SyntheticSpec apply_preset(SyntheticSpec spec, const std::string& preset) {
    if (preset.empty()) return spec;
    const SyntheticSpec base = preset == "dataset1" ? dataset1_preset() : dataset2_preset();
    spec.delta_scale = base.delta_scale;
    spec.noise_sd = base.noise_sd;
    return spec;
}

struct FitOpts {
    FitConfig config;
    std::string prior_kind = "gaussian";
    double lambda = 1.0;
    double sigma = 1.0;

    Prior prior() const {
        return prior_kind == "flat" ? Prior::flat() : Prior::gaussian(lambda);
    }
    NoiseModel noise() const { return NoiseModel{NoiseFamily::normal, sigma}; }
};

void add_fit(CLI::App* cmd, FitOpts& fit) {
    cmd->add_option("--prior", fit.prior_kind, "flat | gaussian")
        ->check(CLI::IsMember({"flat", "gaussian"}));
    cmd->add_option("--lambda", fit.lambda, "gaussian prior precision");
    cmd->add_option("--sigma", fit.sigma, "utility noise sd assumed by the model");
    cmd->add_option("--max-iters", fit.config.max_iters, "EM iterations");
    cmd->add_option("--gibbs-n", fit.config.gibbs.n_samples, "retained Gibbs sweeps");
    cmd->add_option("--gibbs-burn", fit.config.gibbs.burn_in, "discarded Gibbs sweeps");
    cmd->add_option("--gibbs-thin", fit.config.gibbs.thin, "keep every thin-th sweep");
    cmd->add_option("--newton-steps", fit.config.newton_steps, "Newton steps per M-step");
    cmd->add_option("--damping", fit.config.newton_damping, "Newton damping in (0,1]");
    cmd->add_option("--tol", fit.config.convergence_tol, "max-norm early-exit threshold");
    cmd->add_flag("--monitor", fit.config.monitor_logpost,
                  "estimate the log posterior each iteration");
    cmd->add_option("--monitor-reps", fit.config.monitor_reps,
                    "replications for the log-posterior estimate");
}

struct DataOpts {
    fs::path rankings;
    fs::path agents;
    fs::path alternatives;
};

void add_data(CLI::App* cmd, DataOpts& data, bool required) {
    auto* r = cmd->add_option("--rankings", data.rankings, "rankings.csv path");
    auto* a = cmd->add_option("--agents", data.agents, "agents.csv path");
    auto* z = cmd->add_option("--alternatives", data.alternatives, "alternatives.csv path");
    if (required) {
        r->required();
        a->required();
        z->required();
    }
}

int cmd_generate(const CommonOpts& common, SyntheticSpec spec, const std::string& preset,
                 const fs::path& from_truth) {
    spec = apply_preset(spec, preset);
    spec.seed = common.seed;
    SyntheticData data;
    if (from_truth.empty()) {
        data = generate_synthetic(spec);
    } else {
        const Parameters truth = load_parameters(from_truth);
        spec.m = truth.m();
        spec.k_dim = truth.k_dim();
        spec.l_dim = truth.l_dim();
        spec.validate();
        AlternativeSet alternatives{Eigen::MatrixXd(spec.m, spec.l_dim)};
        AgentPool agents{Eigen::MatrixXd(spec.n, spec.k_dim)};
        {
            Rng rng(derive_seed(spec.seed, "z"));
            for (int j = 0; j < spec.m; ++j)
                for (int l = 0; l < spec.l_dim; ++l)
                    alternatives.z(j, l) = spec.z_sd * standard_normal(rng);
        }
        {
            Rng rng(derive_seed(spec.seed, "x"));
            for (int i = 0; i < spec.n; ++i)
                for (int k = 0; k < spec.k_dim; ++k)
                    agents.x(i, k) = spec.x_sd * standard_normal(rng);
        }
        data.truth = truth;
        data.noise = NoiseModel{NoiseFamily::normal, spec.noise_sd};
        data.profile = sample_profile(truth, alternatives, agents, data.noise,
                                      derive_seed(spec.seed, "rank"));
    }
    write_profile(data.profile, common.out);
    write_parameters(data.truth, common.out / "truth.csv");
    std::cout << "wrote agents.csv, alternatives.csv, rankings.csv, truth.csv to "
              << common.out.string() << "\n";
    return 0;
}

int cmd_fit(const CommonOpts& common, const DataOpts& data, FitOpts fit) {
    const Profile profile = load_profile(data.rankings, data.agents, data.alternatives);
    fit.config.seed = common.seed;
    fit.config.gibbs.seed = common.seed;
    const FitResult result = fit_map(profile, fit.prior(), fit.noise(), fit.config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    fs::create_directories(common.out);
    write_parameters(result.theta_hat, common.out / "theta.csv");
    std::ostringstream trace;
    trace << "iter,q_before,q_after,logpost,logpost_se\n";
    for (std::size_t t = 0; t < result.trace.size(); ++t) {
        const auto& rec = result.trace[t];
        trace << t << ',' << format_double(rec.q_before) << ',' << format_double(rec.q_after)
              << ',' << format_double(rec.logpost) << ',' << format_double(rec.logpost_se)
              << "\n";
    }
    write_text_atomic(common.out / "trace.csv", trace.str());
    std::ostringstream diag;
    diag << "condition1_ok,identifiable,design_rank,d\n"
         << (result.diagnostics.condition1_ok ? 1 : 0) << ','
         << (result.diagnostics.identifiable ? 1 : 0) << ','
         << result.diagnostics.design_rank << ',' << result.diagnostics.d << "\n";
    write_text_atomic(common.out / "diagnostics.csv", diag.str());
    std::cout << "wrote theta.csv, trace.csv, diagnostics.csv to " << common.out.string()
              << " after " << result.trace.size() << " iterations\n";
    return 0;
}

int cmd_elicit(const CommonOpts& common, ExperimentConfig config, SyntheticSpec spec,
               const std::string& preset, const DataOpts& data, const fs::path& truth,
               const FitOpts& fit, const std::string& criteria_csv) {
    config.synthetic = apply_preset(spec, preset);
    config.use_files = !data.rankings.empty();
    config.rankings_path = data.rankings;
    config.agents_path = data.agents;
    config.alternatives_path = data.alternatives;
    config.truth_path = truth;
    config.fit = fit.config;
    config.prior = fit.prior();
    config.noise = fit.noise();
    config.seed = common.seed;
    config.out_dir = common.out;
    for (const auto& name : CLI::detail::split(criteria_csv, ',')) {
        Criterion c;
        c.kind = parse_criterion_kind(name);
        config.criteria.push_back(std::move(c));
    }
    const ExperimentResult result = run_experiment(config);
    std::cout << "wrote " << result.rows << " rows to " << result.results_path.string()
              << " (diagnostics: " << result.diagnostics_path.string() << ")\n";
    return 0;
}

int cmd_info(const CommonOpts& common, const DataOpts& data, const fs::path& theta_path,
             const FitOpts& fit, const std::string& mode, int design_agent, int n_sim,
             bool include_prior) {
    const Profile profile = load_profile(data.rankings, data.agents, data.alternatives);
    const Parameters theta = load_parameters(theta_path);
    GibbsConfig gibbs = fit.config.gibbs;
    gibbs.seed = common.seed;
    fs::create_directories(common.out);
    if (mode == "observed") {
        const Prior prior = fit.prior();
        const InfoMatrix info = observed_info(profile, theta, fit.noise(), gibbs,
                                              include_prior ? &prior : nullptr);
        write_matrix_csv(info, common.out / "observed_info.csv");
        std::cout << "wrote observed_info.csv (" << info.rows() << "x" << info.cols()
                  << ") to " << common.out.string() << "\n";
    } else {
        if (design_agent < 0 || design_agent >= profile.num_agents())
            throw ValidationError("info: --design-agent out of range");
        const InfoMatrix info =
            expected_info(profile.agents.x.row(design_agent), theta, profile.alternatives,
                          fit.noise(), n_sim, common.seed, gibbs);
        write_matrix_csv(info, common.out / "expected_info.csv");
        std::cout << "wrote expected_info.csv (" << info.rows() << "x" << info.cols()
                  << ") to " << common.out.string() << "\n";
    }
    return 0;
}

int cmd_eval(const fs::path& theta_path, const fs::path& truth_path, const DataOpts& data) {
    const Parameters theta = load_parameters(theta_path);
    const Parameters truth = load_parameters(truth_path);
    std::cout << "kendall_social=" << format_double(kendall_tau(
                     social_ranking(theta), social_ranking(truth)))
              << "\n";
    if (!data.agents.empty() && !data.alternatives.empty() && !data.rankings.empty()) {
        const Profile profile = load_profile(data.rankings, data.agents, data.alternatives);
        double acc = 0.0;
        for (int i = 0; i < profile.num_agents(); ++i) {
            const Eigen::VectorXd x = profile.agents.x.row(i);
            acc += kendall_tau(personalized_ranking(theta, x, profile.alternatives),
                               personalized_ranking(truth, x, profile.alternatives));
        }
        std::cout << "kendall_personal_mean="
                  << format_double(acc / profile.num_agents()) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MAP inference and adaptive preference elicitation for random-utility ranking models"};
    app.require_subcommand(1);

    CommonOpts g_common, f_common, e_common, i_common, v_common;
    SyntheticSpec g_spec, e_spec;
    std::string g_preset, e_preset;
    fs::path g_from_truth;
    DataOpts f_data, e_data, i_data, v_data;
    FitOpts f_fit, e_fit, i_fit;
    fs::path e_truth, i_theta, v_theta, v_truth;
    std::string e_criteria = "random";
    ExperimentConfig e_config;
    std::string i_mode = "observed";
    int i_design_agent = 0;
    int i_n_sim = 200;
    bool i_include_prior = false;

    auto* generate = app.add_subcommand("generate", "draw a synthetic dataset and its ground truth");
    add_common(generate, g_common);
    add_synthetic(generate, g_spec, g_preset);
    generate->add_option("--from-truth", g_from_truth,
                         "param,value CSV supplying the ground truth instead of drawing it");

    auto* fit = app.add_subcommand("fit", "MAP fit on recorded rankings");
    add_common(fit, f_common);
    add_data(fit, f_data, true);
    add_fit(fit, f_fit);

    auto* elicit = app.add_subcommand("elicit", "adaptive elicitation experiment over a design pool");
    add_common(elicit, e_common);
    add_synthetic(elicit, e_spec, e_preset);
    add_data(elicit, e_data, false);
    elicit->add_option("--truth", e_truth, "ground-truth CSV for file datasets");
    add_fit(elicit, e_fit);
    elicit->add_option("--criteria", e_criteria,
                       "comma list: random,d_optimality,e_optimality,social_cv,personal_cv");
    elicit->add_option("--rounds", e_config.rounds, "queries after the initial fit");
    elicit->add_option("--initial", e_config.initial_count, "random initial query count");
    elicit->add_option("--repeats", e_config.repeats, "independent repeats");
    elicit->add_option("--select-n-sim", e_config.select_n_sim,
                       "simulated rankings per candidate design");
    elicit->add_option("--select-gibbs-n", e_config.select_chain.n_samples,
                       "retained sweeps inside candidate evaluation");
    elicit->add_option("--select-gibbs-burn", e_config.select_chain.burn_in,
                       "burn-in inside candidate evaluation");
    elicit->add_flag("--include-prior-in-r,!--no-include-prior-in-r",
                     e_config.include_prior_in_r,
                     "fold the prior precision into R");

    auto* info = app.add_subcommand("info", "write observed or expected information matrices");
    add_common(info, i_common);
    add_data(info, i_data, true);
    info->add_option("--theta", i_theta, "evaluation point, param,value CSV")->required();
    add_fit(info, i_fit);
    info->add_option("--mode", i_mode, "observed | expected")
        ->check(CLI::IsMember({"observed", "expected"}));
    info->add_option("--design-agent", i_design_agent, "agent row used as the design (expected)");
    info->add_option("--n-sim", i_n_sim, "simulated rankings (expected)");
    info->add_flag("--include-prior", i_include_prior, "add prior precision (observed)");

    auto* eval = app.add_subcommand("eval", "Kendall metrics between fitted and true parameters");
    eval->add_option("--theta", v_theta, "fitted param,value CSV")->required();
    eval->add_option("--truth", v_truth, "ground-truth param,value CSV")->required();
    add_data(eval, v_data, false);
    add_common(eval, v_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return cmd_generate(g_common, g_spec, g_preset, g_from_truth);
        if (fit->parsed()) return cmd_fit(f_common, f_data, f_fit);
        if (elicit->parsed())
            return cmd_elicit(e_common, e_config, e_spec, e_preset, e_data, e_truth, e_fit,
                              e_criteria);
        if (info->parsed())
            return cmd_info(i_common, i_data, i_theta, i_fit, i_mode, i_design_agent, i_n_sim,
                            i_include_prior);
        if (eval->parsed()) return cmd_eval(v_theta, v_truth, v_data);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
