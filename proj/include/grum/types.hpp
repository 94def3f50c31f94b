#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "grum/common.hpp"

namespace grum {

/// m alternatives, each described by L real attributes (one row of z).
struct AlternativeSet {
    Eigen::MatrixXd z; // m x L

    int count() const { return static_cast<int>(z.rows()); }
    int attr_dim() const { return static_cast<int>(z.cols()); }
    void validate() const;
};

/// n agents, each described by K real attributes (one row of x).
/// K = L = 0 degenerates to a plain RUM (no attribute effects).
struct AgentPool {
    Eigen::MatrixXd x; // n x K

    int count() const { return static_cast<int>(x.rows()); }
    int attr_dim() const { return static_cast<int>(x.cols()); }
    void validate() const;
};

/// Theta = (delta, B). delta[0] == 0 always; the free parameter vector is
/// (delta_1..delta_{m-1}, B row-major), see model.hpp.
struct Parameters {
    Eigen::VectorXd delta; // length m, delta[0] == 0
    Eigen::MatrixXd b;     // K x L

    int m() const { return static_cast<int>(delta.size()); }
    int k_dim() const { return static_cast<int>(b.rows()); }
    int l_dim() const { return static_cast<int>(b.cols()); }
    void validate() const;
};

enum class NoiseFamily { normal };

/// Location-family noise on perceived utilities. Only the normal family
/// ships; the exponential-family hooks (eta = mu/sigma^2, A(eta) =
/// sigma^2 eta^2 / 2, T(u) = u) are specialized accordingly throughout.
struct NoiseModel {
    NoiseFamily family = NoiseFamily::normal;
    double sigma = 1.0;

    void validate() const;
};

/// A strict total order over alternatives, best first.
struct Ranking {
    std::vector<int> order;

    int size() const { return static_cast<int>(order.size()); }
    bool is_permutation() const;
    /// positions()[alt] = rank position of `alt` (0 = best).
    std::vector<int> positions() const;
    void validate(int m) const;

    bool operator==(const Ranking& other) const { return order == other.order; }
};

/// Observed data: attribute tables plus at most one full ranking per agent.
struct Profile {
    AlternativeSet alternatives;
    AgentPool agents;
    std::vector<std::pair<int, Ranking>> rankings; // (agent index, ranking)

    int num_alternatives() const { return alternatives.count(); }
    int num_agents() const { return agents.count(); }
    void validate() const;
};

enum class PriorKind { flat, gaussian };

/// Isotropic prior over the free parameter vector. flat <=> lambda == 0,
/// in which case MAP coincides with MLE.
struct Prior {
    PriorKind kind = PriorKind::flat;
    double lambda = 0.0;

    static Prior flat() { return Prior{PriorKind::flat, 0.0}; }
    static Prior gaussian(double lambda) { return Prior{PriorKind::gaussian, lambda}; }
    bool is_proper() const { return kind == PriorKind::gaussian && lambda > 0.0; }
    void validate() const;
};

} // namespace grum
