#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qnet {

using NodeId = std::int32_t;

/// Undirected link between two quantum nodes. Routing is directional but
/// both directions draw from the same reserved / on-demand pools, and every
/// pair generated on the edge has the same base fidelity.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double base_fidelity = 0.0;   // fidelity of one freshly generated pair, (0,1]
    int cap_reserved = 0;         // pool available to the reservation phase
    int cap_ondemand = 0;         // pool available to the on-demand phase
    double fidelity_threshold = 0.0; // floor every connection over this edge must meet
};

/// One possible realization of a request's fidelity requirement.
struct Scenario {
    double requirement = 0.0;
    double probability = 0.0;
};

/// Source/destination pair with a discrete distribution over fidelity
/// requirements. Scenarios are kept sorted ascending by requirement.
struct Request {
    int id = 0;
    NodeId source = 0;
    NodeId destination = 0;
    std::vector<Scenario> scenarios;

    double expected_requirement() const;
};

/// Per-pair and per-node prices. The scalar fields mirror the instance file
/// schema; the optional per-node vectors override energy/setup for
/// individual nodes and exist only programmatically.
struct CostParams {
    double energy_per_node = 0.0;   // paid when traffic transits a node
    double repeater_setup = 0.0;    // paid when a node is activated as a repeater
    double reserve_per_pair = 0.0;
    double utilize_per_pair = 0.0;
    double ondemand_per_pair = 0.0;
    std::vector<double> energy_override;  // empty or size |nodes|
    std::vector<double> setup_override;   // empty or size |nodes|

    double energy(NodeId n) const {
        return energy_override.empty() ? energy_per_node : energy_override[static_cast<size_t>(n)];
    }
    double setup(NodeId n) const {
        return setup_override.empty() ? repeater_setup : setup_override[static_cast<size_t>(n)];
    }
    double node_cost(NodeId n) const { return energy(n) + setup(n); }
};

/// Validated quantum network: nodes 0..n-1, undirected edges, requests, and
/// prices. Immutable after validation; safe to share across solver threads.
class NetworkInstance {
public:
    NetworkInstance() = default;
    NetworkInstance(int node_count, std::vector<Edge> edges, std::vector<Request> requests,
                    CostParams costs);

    int node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Request>& requests() const { return requests_; }
    const CostParams& costs() const { return costs_; }

    /// Incident (neighbor, edge index) pairs, sorted by neighbor id. The
    /// same list serves as outbound and inbound set: each undirected edge
    /// contributes one direction each way.
    const std::vector<std::pair<NodeId, int>>& neighbors(NodeId n) const {
        return adjacency_[static_cast<size_t>(n)];
    }

    /// Index of the edge joining u and v, or -1 if absent.
    int edge_index(NodeId u, NodeId v) const;

    /// Throws std::invalid_argument naming the offending field on any
    /// schema or invariant violation, including request endpoints that the
    /// graph cannot connect.
    void validate() const;

private:
    int node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<Request> requests_;
    CostParams costs_;
    std::vector<std::vector<std::pair<NodeId, int>>> adjacency_;

    void build_adjacency();
};

/// Parses and validates an instance file (see README for the schema).
NetworkInstance load_instance(const std::string& path);
NetworkInstance parse_instance(const std::string& json_text);

/// Canonical serialization: nodes ascending, edges with u < v sorted by
/// (u, v), requests sorted by id, scenarios ascending. save(load(x)) is
/// byte-identical for files already in canonical form.
std::string save_instance(const NetworkInstance& instance);
void save_instance(const NetworkInstance& instance, const std::string& path);

/// Uniform edge parameters applied by builtin_topology.
struct TopologyDefaults {
    double base_fidelity = 0.95;
    int cap_reserved = 10;
    int cap_ondemand = 60;
    double fidelity_threshold = 0.8;
};

/// Builds a named topology with no requests: "nsfnet" (14 nodes, 21 edges),
/// "line(k)" or "grid(a,b)". Unknown names throw std::invalid_argument.
NetworkInstance builtin_topology(const std::string& name, const TopologyDefaults& defaults = {});

/// Ascending requirement grid {0, step, 2*step, ...} clamped to f_max.
/// f_max defaults to 0.99: a requirement of exactly 1 is unreachable by any
/// finite purification chain.
std::vector<double> scenario_grid(double step, double f_max = 0.99);

} // namespace qnet
