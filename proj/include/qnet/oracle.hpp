#pragma once

#include "qnet/instance.hpp"
#include "qnet/solution.hpp"

namespace qnet {

/// Instance bounds the brute-force reference accepts. Capacity applies to
/// each edge's reserved and on-demand pool separately.
struct OracleLimits {
    int max_nodes = 6;
    int max_requests = 2;
    int max_scenarios = 3;
    int max_capacity = 8;
};

struct OracleResult {
    bool feasible = false;
    double cost = 0.0;
    Solution solution;
    // Feasible allocation candidates inspected while building the per-edge
    // tables, plus feasible path combinations.
    long long feasible_count = 0;
};

/// Exhaustive reference optimum: every simple-path combination, every
/// integer split of each edge's reserved and on-demand pools among the
/// requests crossing it, and every per-scenario (utilized, on-demand)
/// cover. Shares no code with the solver — fidelity folding, demand
/// inversion, and recourse are recomputed locally from first principles.
/// Throws std::invalid_argument when the instance exceeds `limits`.
OracleResult brute_force(const NetworkInstance& instance, const OracleLimits& limits = {});

} // namespace qnet
