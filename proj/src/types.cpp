#include "grum/types.hpp"

#include <string>

namespace grum {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

} // namespace

void AlternativeSet::validate() const {
    require(count() >= 2, "AlternativeSet: need at least 2 alternatives, got " +
                              std::to_string(count()));
    require(z.allFinite(), "AlternativeSet: non-finite attribute entry");
}

void AgentPool::validate() const {
    require(x.allFinite(), "AgentPool: non-finite attribute entry");
}

void Parameters::validate() const {
    require(delta.size() >= 1, "Parameters: empty delta");
    require(delta.allFinite() && b.allFinite(), "Parameters: non-finite entry");
    require(delta[0] == 0.0, "Parameters: delta[0] must be 0 (normalization)");
}

void NoiseModel::validate() const {
    require(sigma > 0.0 && std::isfinite(sigma), "NoiseModel: sigma must be positive");
}

bool Ranking::is_permutation() const {
    const int m = size();
    std::vector<char> seen(static_cast<size_t>(m), 0);
    for (int a : order) {
        if (a < 0 || a >= m || seen[static_cast<size_t>(a)]) return false;
        seen[static_cast<size_t>(a)] = 1;
    }
    return true;
}

std::vector<int> Ranking::positions() const {
    std::vector<int> pos(order.size());
    for (int j = 0; j < size(); ++j) pos[static_cast<size_t>(order[j])] = j;
    return pos;
}

void Ranking::validate(int m) const {
    require(size() == m, "Ranking: length " + std::to_string(size()) +
                             " does not match m = " + std::to_string(m));
    require(is_permutation(), "Ranking: not a permutation of 0.." + std::to_string(m - 1));
}

void Profile::validate() const {
    alternatives.validate();
    agents.validate();
    const int m = num_alternatives();
    const int n = num_agents();
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (const auto& [agent, ranking] : rankings) {
        require(agent >= 0 && agent < n,
                "Profile: ranking references agent index " + std::to_string(agent) +
                    " outside 0.." + std::to_string(n - 1));
        require(!seen[static_cast<size_t>(agent)],
                "Profile: duplicate ranking for agent " + std::to_string(agent));
        seen[static_cast<size_t>(agent)] = 1;
        ranking.validate(m);
    }
}

void Prior::validate() const {
    require(lambda >= 0.0 && std::isfinite(lambda), "Prior: lambda must be >= 0");
    if (kind == PriorKind::flat)
        require(lambda == 0.0, "Prior: flat prior requires lambda == 0");
    else
        require(lambda > 0.0, "Prior: gaussian prior requires lambda > 0");
}

} // namespace grum
