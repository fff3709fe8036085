#include "qnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace qnet {

SpModel::SpModel(const NetworkInstance& instance, SolverOptions options)
    : instance_(&instance), options_(options) {
    const auto& edges = instance.edges();
    const auto& requests = instance.requests();

    tables_.reserve(edges.size());
    for (const Edge& e : edges) {
        tables_.emplace_back(e.base_fidelity, std::max(1, e.cap_reserved + e.cap_ondemand));
    }

    scenario_offset_.resize(requests.size());
    total_scenarios_ = 0;
    for (size_t r = 0; r < requests.size(); ++r) {
        scenario_offset_[r] = total_scenarios_;
        total_scenarios_ += static_cast<int>(requests[r].scenarios.size());
    }

    demands_.assign(edges.size() * static_cast<size_t>(total_scenarios_), std::nullopt);
    usable_.assign(edges.size() * requests.size(), 1);
    for (size_t e = 0; e < edges.size(); ++e) {
        for (size_t r = 0; r < requests.size(); ++r) {
            for (size_t w = 0; w < requests[r].scenarios.size(); ++w) {
                const double target =
                    std::max(requests[r].scenarios[w].requirement, edges[e].fidelity_threshold);
                const auto k = tables_[e].min_pairs(target);
                demands_[index(static_cast<int>(e), static_cast<int>(r), static_cast<int>(w))] = k;
                if (!k) usable_[usable_index(static_cast<int>(e), static_cast<int>(r))] = 0;
            }
        }
    }

    // A request is structurally infeasible when no source-destination path
    // survives the removal of its unusable edges.
    for (size_t r = 0; r < requests.size(); ++r) {
        std::vector<char> reached(static_cast<size_t>(instance.node_count()), 0);
        std::queue<NodeId> frontier;
        frontier.push(requests[r].source);
        reached[static_cast<size_t>(requests[r].source)] = 1;
        while (!frontier.empty()) {
            NodeId n = frontier.front();
            frontier.pop();
            for (const auto& [to, edge] : instance.neighbors(n)) {
                if (!usable_[usable_index(edge, static_cast<int>(r))]) continue;
                if (!reached[static_cast<size_t>(to)]) {
                    reached[static_cast<size_t>(to)] = 1;
                    frontier.push(to);
                }
            }
        }
        if (!reached[static_cast<size_t>(requests[r].destination)]) {
            blocked_requests_.push_back(static_cast<int>(r));
            for (size_t e = 0; e < edges.size(); ++e) {
                for (size_t w = 0; w < requests[r].scenarios.size(); ++w) {
                    if (!demand(static_cast<int>(e), static_cast<int>(r), static_cast<int>(w))) {
                        diagnostics_.push_back(UnreachableDemand{static_cast<int>(e),
                                                                 static_cast<int>(r),
                                                                 static_cast<int>(w)});
                    }
                }
            }
        }
    }
}

std::optional<int> SpModel::max_demand(int edge, int request) const {
    if (!edge_usable(edge, request)) return std::nullopt;
    int worst = 0;
    const auto& scenarios = instance_->requests()[static_cast<size_t>(request)].scenarios;
    for (size_t w = 0; w < scenarios.size(); ++w) {
        worst = std::max(worst, *demand(edge, request, static_cast<int>(w)));
    }
    return worst;
}

int SpModel::num_route_vars() const {
    return 2 * static_cast<int>(instance_->edges().size()) *
           static_cast<int>(instance_->requests().size());
}

int SpModel::num_reserve_vars() const {
    return static_cast<int>(instance_->edges().size()) *
           static_cast<int>(instance_->requests().size());
}

int SpModel::num_utilize_vars() const {
    return static_cast<int>(instance_->edges().size()) * total_scenarios_;
}

int SpModel::num_ondemand_vars() const { return num_utilize_vars(); }

void scenario_combo_digits(const std::vector<int>& radices, long long combo,
                           std::vector<int>& digits) {
    digits.assign(radices.size(), 0);
    long long rem = combo;
    for (size_t i = radices.size(); i-- > 0;) {
        digits[i] = static_cast<int>(rem % radices[i]);
        rem /= radices[i];
    }
}

namespace {

std::string edge_tag(const Edge& e) {
    return std::to_string(e.u) + "-" + std::to_string(e.v);
}

std::string dir_tag(NodeId i, NodeId j, int r) {
    return "x[" + std::to_string(i) + ">" + std::to_string(j) + ",r" + std::to_string(r) + "]";
}

} // namespace

void SpModel::dump_lp(std::ostream& out) const {
    const auto& inst = *instance_;
    const auto& edges = inst.edges();
    const auto& requests = inst.requests();

    out << "\\ deterministic equivalent: " << requests.size() << " requests, " << edges.size()
        << " edges, " << total_scenarios_ << " scenario rows\n";
    out << "\\ on-demand mode: " << (options_.joint_scenarios ? "joint" : "worst-case") << "\n";
    out << "min:";
    for (size_t r = 0; r < requests.size(); ++r) {
        for (const Edge& e : edges) {
            for (int dir = 0; dir < 2; ++dir) {
                const NodeId head = dir == 0 ? e.v : e.u;
                const NodeId tail = dir == 0 ? e.u : e.v;
                const double node_cost = inst.costs().node_cost(head);
                out << " + " << node_cost << " " << dir_tag(tail, head, static_cast<int>(r));
                if (options_.per_pair_node_cost) {
                    out << "*yr[" << edge_tag(e) << ",r" << r << "]";
                }
            }
            out << " + " << inst.costs().reserve_per_pair << " yr[" << edge_tag(e) << ",r" << r
                << "]";
        }
        for (size_t w = 0; w < requests[r].scenarios.size(); ++w) {
            const double p = requests[r].scenarios[w].probability;
            for (const Edge& e : edges) {
                out << " + " << p * inst.costs().utilize_per_pair << " ye[" << edge_tag(e) << ",r"
                    << r << ",w" << w << "]";
                out << " + " << p * inst.costs().ondemand_per_pair << " yo[" << edge_tag(e) << ",r"
                    << r << ",w" << w << "]";
            }
        }
    }
    out << "\ns.t.\n";
    for (size_t r = 0; r < requests.size(); ++r) {
        const Request& req = requests[r];
        out << "source-outflow[r" << r << "]:";
        for (const auto& [to, edge] : inst.neighbors(req.source)) {
            (void)edge;
            out << " + " << dir_tag(req.source, to, static_cast<int>(r));
            out << " - " << dir_tag(to, req.source, static_cast<int>(r));
        }
        out << " = 1\n";
        out << "destination-inflow[r" << r << "]:";
        for (const auto& [to, edge] : inst.neighbors(req.destination)) {
            (void)edge;
            out << " + " << dir_tag(to, req.destination, static_cast<int>(r));
            out << " - " << dir_tag(req.destination, to, static_cast<int>(r));
        }
        out << " = 1\n";
        for (NodeId n = 0; n < inst.node_count(); ++n) {
            if (n == req.source || n == req.destination) continue;
            out << "flow-conservation[n" << n << ",r" << r << "]:";
            for (const auto& [to, edge] : inst.neighbors(n)) {
                (void)edge;
                out << " + " << dir_tag(n, to, static_cast<int>(r));
                out << " - " << dir_tag(to, n, static_cast<int>(r));
            }
            out << " = 0\n";
        }
        for (NodeId n = 0; n < inst.node_count(); ++n) {
            out << "no-loop[n" << n << ",r" << r << "]:";
            for (const auto& [to, edge] : inst.neighbors(n)) {
                (void)edge;
                out << " + " << dir_tag(n, to, static_cast<int>(r));
            }
            out << " <= 1\n";
        }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        out << "reserve-capacity[" << edge_tag(edges[e]) << "]:";
        for (size_t r = 0; r < requests.size(); ++r) {
            out << " + yr[" << edge_tag(edges[e]) << ",r" << r << "]";
        }
        out << " <= " << edges[e].cap_reserved << "\n";
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        for (size_t r = 0; r < requests.size(); ++r) {
            out << "link-reserve[" << edge_tag(edges[e]) << ",r" << r << "]: yr["
                << edge_tag(edges[e]) << ",r" << r << "] <= " << edges[e].cap_reserved << " "
                << dir_tag(edges[e].u, edges[e].v, static_cast<int>(r)) << " + "
                << edges[e].cap_reserved << " "
                << dir_tag(edges[e].v, edges[e].u, static_cast<int>(r)) << "\n";
        }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        for (size_t r = 0; r < requests.size(); ++r) {
            for (size_t w = 0; w < requests[r].scenarios.size(); ++w) {
                out << "utilization-bound[" << edge_tag(edges[e]) << ",r" << r << ",w" << w
                    << "]: ye[" << edge_tag(edges[e]) << ",r" << r << ",w" << w << "] <= yr["
                    << edge_tag(edges[e]) << ",r" << r << "]\n";
            }
        }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        for (size_t r = 0; r < requests.size(); ++r) {
            for (size_t w = 0; w < requests[r].scenarios.size(); ++w) {
                const auto k = demand(static_cast<int>(e), static_cast<int>(r), static_cast<int>(w));
                out << "fidelity-demand[" << edge_tag(edges[e]) << ",r" << r << ",w" << w << "]: ";
                if (k) {
                    out << "ye[" << edge_tag(edges[e]) << ",r" << r << ",w" << w << "] + yo["
                        << edge_tag(edges[e]) << ",r" << r << ",w" << w << "] >= " << *k << " "
                        << dir_tag(edges[e].u, edges[e].v, static_cast<int>(r)) << " + " << *k
                        << " " << dir_tag(edges[e].v, edges[e].u, static_cast<int>(r)) << "\n";
                } else {
                    out << dir_tag(edges[e].u, edges[e].v, static_cast<int>(r)) << " + "
                        << dir_tag(edges[e].v, edges[e].u, static_cast<int>(r))
                        << " = 0  \\ unreachable fidelity\n";
                }
            }
        }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        for (size_t r = 0; r < requests.size(); ++r) {
            for (size_t w = 0; w < requests[r].scenarios.size(); ++w) {
                out << "ondemand-max[" << edge_tag(edges[e]) << ",r" << r << ",w" << w << "]: om["
                    << edge_tag(edges[e]) << ",r" << r << "] >= yo[" << edge_tag(edges[e]) << ",r"
                    << r << ",w" << w << "]\n";
            }
        }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        out << "ondemand-capacity[" << edge_tag(edges[e]) << "]:";
        for (size_t r = 0; r < requests.size(); ++r) {
            out << " + om[" << edge_tag(edges[e]) << ",r" << r << "]";
        }
        out << " <= " << edges[e].cap_ondemand << "\n";
    }
    out << "binary: x\n";
    out << "general: yr, ye, yo, om\n";
}

namespace {

struct Violation {
    std::string text;
};

[[noreturn]] void dimension_error(const std::string& what) {
    throw std::invalid_argument("evaluate: dimension mismatch: " + what);
}

} // namespace

FeasibilityReport evaluate(const Solution& solution, const NetworkInstance& instance,
                           const SolverOptions& options) {
    const auto& requests = instance.requests();
    if (solution.plans.size() != requests.size()) {
        dimension_error("expected one plan per request");
    }

    SpModel model(instance, options);
    FeasibilityReport report;

    auto violated = [&](const std::string& name) {
        report.feasible = false;
        report.violated = name;
        return report;
    };

    // Structural checks first; they also establish the dimensions used by
    // the cost recomputation below.
    for (size_t r = 0; r < requests.size(); ++r) {
        const RequestPlan& plan = solution.plans[r];
        if (plan.request != static_cast<int>(r)) dimension_error("plan order");
        if (plan.path.empty()) {
            if (!plan.edges.empty()) dimension_error("edge allocations without a path");
            return violated("source-outflow at request " + std::to_string(r));
        }
        if (plan.edges.size() + 1 != plan.path.size()) dimension_error("edges vs path length");
        if (plan.path.front() != requests[r].source) {
            return violated("source-outflow at request " + std::to_string(r));
        }
        if (plan.path.back() != requests[r].destination) {
            return violated("destination-inflow at request " + std::to_string(r));
        }
        std::vector<char> seen(static_cast<size_t>(instance.node_count()), 0);
        for (size_t i = 0; i < plan.path.size(); ++i) {
            const NodeId n = plan.path[i];
            if (n < 0 || n >= instance.node_count()) dimension_error("unknown node on path");
            if (seen[static_cast<size_t>(n)]) {
                return violated("no-loop at request " + std::to_string(r) + ", node " +
                                std::to_string(n));
            }
            seen[static_cast<size_t>(n)] = 1;
            if (i + 1 < plan.path.size()) {
                const int edge = instance.edge_index(n, plan.path[i + 1]);
                if (edge < 0) {
                    return violated("flow-conservation at request " + std::to_string(r) +
                                    ": no edge " + std::to_string(n) + "-" +
                                    std::to_string(plan.path[i + 1]));
                }
                if (plan.edges[i].edge != edge) dimension_error("edge allocation order");
            }
        }
        for (const EdgeAllocation& alloc : plan.edges) {
            if (alloc.reserved < 0) return violated("nonnegative reservation");
            if (!options.joint_scenarios &&
                alloc.splits.size() != requests[r].scenarios.size()) {
                dimension_error("splits vs scenario count");
            }
        }
    }

    // Reserve capacity per edge.
    std::vector<long long> reserved_on_edge(instance.edges().size(), 0);
    for (const RequestPlan& plan : solution.plans) {
        for (const EdgeAllocation& alloc : plan.edges) {
            reserved_on_edge[static_cast<size_t>(alloc.edge)] += alloc.reserved;
        }
    }
    for (size_t e = 0; e < instance.edges().size(); ++e) {
        if (reserved_on_edge[e] > instance.edges()[e].cap_reserved) {
            return violated("reserve-capacity at edge " + std::to_string(instance.edges()[e].u) +
                            "-" + std::to_string(instance.edges()[e].v));
        }
    }

    double stage1 = 0.0;
    for (size_t r = 0; r < requests.size(); ++r) {
        const RequestPlan& plan = solution.plans[r];
        for (size_t i = 0; i < plan.edges.size(); ++i) {
            const NodeId head = plan.path[i + 1];
            const double node_cost = instance.costs().node_cost(head);
            stage1 += options.per_pair_node_cost ? node_cost * plan.edges[i].reserved : node_cost;
            stage1 += instance.costs().reserve_per_pair * plan.edges[i].reserved;
        }
    }

    double stage2 = 0.0;
    if (!options.joint_scenarios) {
        // Recourse checks per (edge, request, scenario), then the
        // worst-case on-demand load per edge.
        std::vector<long long> ondemand_worst(instance.edges().size(), 0);
        for (size_t r = 0; r < requests.size(); ++r) {
            const RequestPlan& plan = solution.plans[r];
            const auto& scenarios = requests[r].scenarios;
            for (const EdgeAllocation& alloc : plan.edges) {
                int worst = 0;
                for (size_t w = 0; w < scenarios.size(); ++w) {
                    const RecourseSplit& s = alloc.splits[w];
                    if (s.utilized < 0 || s.ondemand < 0) return violated("nonnegative recourse");
                    if (s.utilized > alloc.reserved) {
                        return violated("utilization-bound at request " + std::to_string(r));
                    }
                    const auto k = model.demand(alloc.edge, static_cast<int>(r), static_cast<int>(w));
                    if (!k || s.utilized + s.ondemand < *k) {
                        return violated("fidelity-demand at request " + std::to_string(r) +
                                        ", edge index " + std::to_string(alloc.edge) +
                                        ", scenario " + std::to_string(w));
                    }
                    worst = std::max(worst, s.ondemand);
                    stage2 += scenarios[w].probability *
                              (instance.costs().utilize_per_pair * s.utilized +
                               instance.costs().ondemand_per_pair * s.ondemand);
                }
                ondemand_worst[static_cast<size_t>(alloc.edge)] += worst;
            }
        }
        for (size_t e = 0; e < instance.edges().size(); ++e) {
            if (ondemand_worst[e] > instance.edges()[e].cap_ondemand) {
                return violated("ondemand-capacity at edge " +
                                std::to_string(instance.edges()[e].u) + "-" +
                                std::to_string(instance.edges()[e].v));
            }
        }
    } else {
        // Joint mode: recourse is indexed by the scenario combination of
        // the requests sharing each edge; the on-demand cap binds per
        // combination. Combinations enumerate with the last request's
        // scenario varying fastest.
        std::vector<std::vector<int>> users(instance.edges().size());
        std::vector<std::vector<int>> reserved(instance.edges().size());
        for (size_t r = 0; r < requests.size(); ++r) {
            for (const EdgeAllocation& alloc : solution.plans[r].edges) {
                users[static_cast<size_t>(alloc.edge)].push_back(static_cast<int>(r));
                reserved[static_cast<size_t>(alloc.edge)].push_back(alloc.reserved);
            }
        }
        std::vector<const JointEdgeRecourse*> recourse_by_edge(instance.edges().size(), nullptr);
        for (const JointEdgeRecourse& jr : solution.joint_recourse) {
            if (jr.edge < 0 || jr.edge >= static_cast<int>(instance.edges().size())) {
                dimension_error("joint recourse edge index");
            }
            recourse_by_edge[static_cast<size_t>(jr.edge)] = &jr;
        }
        std::vector<int> digits;
        for (size_t e = 0; e < instance.edges().size(); ++e) {
            if (users[e].empty()) continue;
            const JointEdgeRecourse* jr = recourse_by_edge[e];
            if (jr == nullptr || jr->requests != users[e]) {
                dimension_error("joint recourse does not cover edge " + std::to_string(e));
            }
            std::vector<int> radices;
            long long combos = 1;
            for (int r : users[e]) {
                radices.push_back(static_cast<int>(requests[static_cast<size_t>(r)].scenarios.size()));
                combos *= radices.back();
            }
            if (static_cast<long long>(jr->by_combo.size()) != combos) {
                dimension_error("joint recourse combo count");
            }
            for (long long c = 0; c < combos; ++c) {
                scenario_combo_digits(radices, c, digits);
                double prob = 1.0;
                long long ondemand_sum = 0;
                if (jr->by_combo[static_cast<size_t>(c)].size() != users[e].size()) {
                    dimension_error("joint recourse row width");
                }
                for (size_t i = 0; i < users[e].size(); ++i) {
                    const int r = users[e][i];
                    const int w = digits[i];
                    const RecourseSplit& s = jr->by_combo[static_cast<size_t>(c)][i];
                    prob *= requests[static_cast<size_t>(r)].scenarios[static_cast<size_t>(w)].probability;
                    if (s.utilized < 0 || s.ondemand < 0) return violated("nonnegative recourse");
                    if (s.utilized > reserved[e][i]) {
                        return violated("utilization-bound at request " + std::to_string(r));
                    }
                    const auto k = model.demand(static_cast<int>(e), r, w);
                    if (!k || s.utilized + s.ondemand < *k) {
                        return violated("fidelity-demand at request " + std::to_string(r) +
                                        ", edge index " + std::to_string(e) + ", scenario " +
                                        std::to_string(w));
                    }
                    ondemand_sum += s.ondemand;
                }
                if (ondemand_sum > instance.edges()[e].cap_ondemand) {
                    return violated("ondemand-capacity at edge " +
                                    std::to_string(instance.edges()[e].u) + "-" +
                                    std::to_string(instance.edges()[e].v));
                }
                for (size_t i = 0; i < users[e].size(); ++i) {
                    const RecourseSplit& s = jr->by_combo[static_cast<size_t>(c)][i];
                    stage2 += prob * (instance.costs().utilize_per_pair * s.utilized +
                                      instance.costs().ondemand_per_pair * s.ondemand);
                }
            }
        }
    }

    report.feasible = true;
    report.objective = SpObjective::of(stage1, stage2);
    return report;
}

} // namespace qnet
