#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnet/instance.hpp"
#include "qnet/model.hpp"
#include "qnet/solution.hpp"

namespace qnet {

/// One candidate route: node sequence plus the edge index of every hop.
struct RoutePath {
    std::vector<NodeId> nodes;
    std::vector<int> edges;

    int hops() const { return static_cast<int>(edges.size()); }
};

/// Candidate routes of one request, sorted by hop count then lexicographic
/// node sequence.
struct PathSet {
    int request = -1;
    std::vector<RoutePath> paths;
    bool truncated = false;         // the max_paths budget cut enumeration short
    std::vector<int> blocked_edges; // edges with unreachable demand for this request
};

/// Enumerates simple source→destination paths over the edges usable by the
/// request, shortest (by hop count) first and lexicographic within equal
/// length, stopping after options.max_paths paths. Throws std::runtime_error
/// naming the blocked edges when no path survives.
PathSet enumerate_paths(const SpModel& model, int request);

/// Demand distribution and prices for one (edge, request) pair.
struct NewsvendorProfile {
    std::vector<int> demands;        // pairs needed per scenario, nondecreasing
    std::vector<double> probabilities; // aligned with demands, sums to 1
    double reserve_price = 0.0;
    double utilize_price = 0.0;
    double ondemand_price = 0.0;
    int cap_reserved = 0;
    int cap_ondemand = 0;
};

struct NewsvendorResult {
    bool feasible = false;
    int reserved = 0;
    double expected_cost = 0.0;        // reserve_price·reserved + expected recourse
    std::vector<RecourseSplit> splits; // per scenario
};

/// Cheapest reservation level for one (edge, request) pair in isolation:
/// scans y ∈ 0..cap_reserved, fills each scenario's demand from the cheaper
/// source first (reserved pairs when utilize_price ≤ ondemand_price, on-demand
/// pairs otherwise), and breaks ties toward smaller y. Infeasible when every
/// y forces some scenario's on-demand buy above cap_ondemand.
NewsvendorResult newsvendor_reserve(const NewsvendorProfile& profile);

/// Exact optimum of the compiled model over enumerated path sets:
/// branch-and-bound assigns one path per request (fewest-candidates-first
/// branch order), bounding by capacity-unconstrained per-request minima;
/// leaves price shared edges exactly via integer allocation of the reserve
/// and on-demand capacities among the requests on the edge.
Solution solve_sp(const NetworkInstance& instance, const SolverOptions& options = {});

/// Expected-value baseline: stage 1 (paths and reservations) is optimized
/// against the single mean requirement per request, then frozen while the
/// true scenario set prices the recourse. Infeasible only when a shortfall
/// exceeds the on-demand capacity.
Solution solve_evp(const NetworkInstance& instance, const SolverOptions& options = {});

/// Wait-and-see bound: deterministic solves with requirements known.
struct WaitAndSee {
    struct Component {
        std::vector<std::pair<int, int>> fixed; // (request, scenario index) pinned here
        double probability = 0.0;
        Solution solution;
    };

    bool feasible = false;
    double expected_cost = 0.0;
    std::string diagnostic;
    std::vector<Component> components;
};

/// Independent mode decomposes per (request, scenario) with full capacities
/// per solve — a valid lower bound that sidesteps the scenario product
/// space. Joint mode solves every scenario combination of the full request
/// set (at most 3 requests).
WaitAndSee solve_perfect_info(const NetworkInstance& instance, const SolverOptions& options = {});

} // namespace qnet
