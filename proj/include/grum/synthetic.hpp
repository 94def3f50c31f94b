#pragma once

#include <cstdint>

#include "grum/types.hpp"

namespace grum {

/// Generative recipe: delta_j ~ delta_scale * Normal(delta_mean, delta_sd),
/// B, x, z entries ~ Normal(0, *_sd), noise sd on perceived utilities.
struct SyntheticSpec {
    int n = 100;
    int m = 5;
    int k_dim = 0;
    int l_dim = 0;
    double delta_scale = 1.0;
    double delta_mean = 1.0;
    double delta_sd = 1.0;
    double b_sd = 1.0;
    double x_sd = 1.0;
    double z_sd = 1.0;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Narrow intrinsic-utility spread (scale 0.1), unit noise: hard instances.
SyntheticSpec dataset1_preset();

/// Full spread, noise variance 1/4: ranks are much easier to recover.
SyntheticSpec dataset2_preset();

struct SyntheticData {
    Profile profile;
    Parameters truth; // delta shifted so truth.delta[0] == 0 (rank-preserving)
    NoiseModel noise;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

} // namespace grum
