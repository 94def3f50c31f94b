#pragma once

#include "grum/common.hpp"

namespace grum {

/// Standard normal CDF, accurate in the left tail.
double norm_cdf(double x);

/// Standard normal survival function 1 - Phi(x), accurate in the right tail.
double norm_sf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Inverse standard normal CDF for p in (0, 1).
double norm_quantile(double p);

/// N(0,1) draw via inverse CDF. Stateless, one rng word per draw.
inline double standard_normal(Rng& rng) { return norm_quantile(uniform_open(rng)); }

/// One draw from N(mean, sd^2) restricted to (lower, upper). Bounds may be
/// +-infinity. The result is strictly inside the interval. Inverse CDF in
/// the central regime; when the whole interval lies more than 4 sd into a
/// tail, switches to exponential-proposal rejection (one-sided) or bounded
/// uniform rejection (two-sided), which stay exact where the CDF gap
/// underflows.
double sample_truncated_normal(double mean, double sd, double lower, double upper, Rng& rng);

} // namespace grum
