#pragma once

#include <string>
#include <vector>

#include "qnet/instance.hpp"

namespace qnet {

/// Cost decomposition of a plan. stage1 covers node activation and
/// reservation, stage2 the probability-weighted utilization and on-demand
/// spend; total is always stage1 + stage2 computed on the same path.
struct SpObjective {
    double stage1 = 0.0;
    double stage2 = 0.0;
    double total = 0.0;

    static SpObjective of(double s1, double s2) { return SpObjective{s1, s2, s1 + s2}; }
};

/// Per-scenario recourse on one edge of one request's path.
struct RecourseSplit {
    int utilized = 0; // pairs drawn from the reservation
    int ondemand = 0; // pairs bought on demand
};

/// Reservation and recourse for one edge along a request's path.
struct EdgeAllocation {
    int edge = -1;    // index into NetworkInstance::edges()
    int reserved = 0; // stage-1 pairs booked on this edge for this request
    std::vector<RecourseSplit> splits; // one entry per scenario of the owning request
};

/// Routing and allocation for one request.
struct RequestPlan {
    int request = -1;             // index into NetworkInstance::requests()
    std::vector<NodeId> path;     // node sequence source..destination; empty if unrouted
    std::vector<EdgeAllocation> edges; // one per hop, in path order
};

/// Recourse for one scenario combination in joint-scenario mode: one split
/// per (request on this edge), aligned with `requests`.
struct JointEdgeRecourse {
    int edge = -1;
    std::vector<int> requests;                        // request indices using the edge
    std::vector<std::vector<RecourseSplit>> by_combo; // [combo][position in requests]
};

enum class SolveStatus { optimal, infeasible };

struct SolverStats {
    long long nodes_explored = 0;
    long long leaves_evaluated = 0;
    bool truncated = false;      // a path budget was exhausted for some request
    bool time_limit_hit = false; // incumbent returned without proof of optimality
    double elapsed_seconds = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::string method;      // "sp", "evp", "perfect-info", "oracle"
    SpObjective objective;
    std::vector<RequestPlan> plans;
    std::vector<JointEdgeRecourse> joint_recourse; // populated in joint-scenario mode only
    std::string diagnostic;  // why status == infeasible
    SolverStats stats;

    bool feasible() const { return status == SolveStatus::optimal; }
};

/// JSON rendering of a solution. Deterministic: field order is fixed and no
/// wall-clock data is included (elapsed time is reported on stderr by the
/// CLI instead, so repeated runs serialize identically).
std::string solution_to_json(const Solution& solution, const NetworkInstance& instance);

} // namespace qnet
