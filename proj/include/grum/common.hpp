#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace grum {

/// Bad inputs: malformed files, dimension mismatches, broken invariants.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Well-formed inputs on which the numerics cannot proceed
/// (unbounded likelihood, singular information matrix).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Every stream of randomness in the system is seeded as
/// derive_seed(parent_seed, role_label, indices...). Two units with
/// different roles or indices never share a stream, and reruns with the
/// same top-level seed reproduce byte-identical results.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view role,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a over the role label
    for (char c : role) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    return mix64(mix64(mix64(base ^ h) ^ a) ^ b);
}

/// Uniform in the open interval (0, 1); 53-bit resolution, never 0 or 1.
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

} // namespace grum
