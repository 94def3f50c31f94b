#include "grum/synthetic.hpp"

#include "grum/common.hpp"
#include "grum/model.hpp"
#include "grum/truncnorm.hpp"

namespace grum {

void SyntheticSpec::validate() const {
    if (n < 1) throw ValidationError("synthetic spec: n must be >= 1");
    if (m < 2) throw ValidationError("synthetic spec: m must be >= 2");
    if (k_dim < 0 || l_dim < 0)
        throw ValidationError("synthetic spec: attribute dimensions must be >= 0");
    if (delta_sd < 0 || b_sd < 0 || x_sd < 0 || z_sd < 0)
        throw ValidationError("synthetic spec: attribute sds must be >= 0");
    if (!(noise_sd > 0)) throw ValidationError("synthetic spec: noise_sd must be > 0");
}

SyntheticSpec dataset1_preset() {
    SyntheticSpec spec;
    spec.delta_scale = 0.1;
    spec.noise_sd = 1.0;
    return spec;
}

SyntheticSpec dataset2_preset() {
    SyntheticSpec spec;
    spec.delta_scale = 1.0;
    spec.noise_sd = 0.5;
    return spec;
}

namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, double sd, std::uint64_t seed) {
    Eigen::MatrixXd out(rows, cols);
    Rng rng(seed);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = sd * standard_normal(rng);
    return out;
}

} // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();

    // Block seeds keep each table stable when the others change size.
    Eigen::VectorXd delta =
        gaussian_matrix(spec.m, 1, spec.delta_sd, derive_seed(spec.seed, "delta"));
    delta.array() = spec.delta_scale * (delta.array() + spec.delta_mean);
    delta.array() -= delta[0]; // pin the normalized coordinate system

    SyntheticData data;
    data.truth.delta = delta;
    data.truth.b =
        gaussian_matrix(spec.k_dim, spec.l_dim, spec.b_sd, derive_seed(spec.seed, "b"));
    data.noise = NoiseModel{NoiseFamily::normal, spec.noise_sd};

    AlternativeSet alternatives{
        gaussian_matrix(spec.m, spec.l_dim, spec.z_sd, derive_seed(spec.seed, "z"))};
    AgentPool agents{
        gaussian_matrix(spec.n, spec.k_dim, spec.x_sd, derive_seed(spec.seed, "x"))};
    data.profile = sample_profile(data.truth, alternatives, agents, data.noise,
                                  derive_seed(spec.seed, "rank"));
    return data;
}

} // namespace grum
