#include "qnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Local fidelity arithmetic, deliberately not shared with the purification
// module: the oracle re-derives demands from the recurrence alone.
double fold(double a, double b) { return a * b / (a * b + (1.0 - a) * (1.0 - b)); }

// Smallest pair count whose purification chain reaches `target`, or -1 when
// `cap` pairs cannot (including the chain saturating below it).
int pairs_needed(double base, double target, int cap) {
    double f = base;
    if (f >= target) return cap >= 1 ? 1 : -1;
    for (int k = 2; k <= cap; ++k) {
        const double next = fold(f, base);
        if (next <= f) return -1;
        f = next;
        if (f >= target) return k;
    }
    return -1;
}

struct OraclePath {
    std::vector<NodeId> nodes;
    std::vector<int> edges;
};

std::vector<OraclePath> all_simple_paths(const NetworkInstance& inst, NodeId src, NodeId dst) {
    std::vector<OraclePath> out;
    std::vector<NodeId> stack{src};
    std::vector<int> edge_stack;
    std::vector<char> used(static_cast<size_t>(inst.node_count()), 0);
    used[static_cast<size_t>(src)] = 1;

    std::function<void(NodeId)> dfs = [&](NodeId n) {
        if (n == dst) {
            out.push_back(OraclePath{stack, edge_stack});
            return;
        }
        for (const auto& [to, edge] : inst.neighbors(n)) {
            if (used[static_cast<size_t>(to)]) continue;
            used[static_cast<size_t>(to)] = 1;
            stack.push_back(to);
            edge_stack.push_back(edge);
            dfs(to);
            edge_stack.pop_back();
            stack.pop_back();
            used[static_cast<size_t>(to)] = 0;
        }
    };
    dfs(src);
    std::sort(out.begin(), out.end(), [](const OraclePath& a, const OraclePath& b) {
        if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
        return a.nodes < b.nodes;
    });
    return out;
}

// Cheapest (utilized, ondemand) cover of demand k under caps, by full scan.
// Returns false when no pair covers it.
bool best_split(int k, int y_cap, int o_cap, double up, double op, RecourseSplit& out) {
    double best = kInf;
    bool found = false;
    for (int ye = 0; ye <= y_cap; ++ye) {
        for (int yo = 0; yo <= o_cap; ++yo) {
            if (ye + yo < k) continue;
            const double c = up * ye + op * yo;
            if (c < best - 1e-12) {
                best = c;
                out = RecourseSplit{ye, yo};
                found = true;
            }
        }
    }
    return found;
}

// Everything the oracle knows about one (edge, request) pair: per-scenario
// demands and the per-(reservation, on-demand share) recourse table.
struct PairEval {
    std::vector<int> demand;             // -1 = unreachable
    std::vector<std::vector<double>> cost;  // [y][o] expected recourse, inf infeasible
    std::vector<std::vector<std::vector<RecourseSplit>>> splits; // [y][o][scenario]
};

struct EdgeBest {
    bool feasible = false;
    double cost = 0.0;                       // reservations + expected recourse
    std::vector<int> reserved;               // per user
    std::vector<std::vector<RecourseSplit>> splits; // per user, per scenario
    long long feasible_candidates = 0;
};

} // namespace

OracleResult brute_force(const NetworkInstance& instance, const OracleLimits& limits) {
    std::ostringstream refusal;
    if (instance.node_count() > limits.max_nodes) {
        refusal << "brute_force: " << instance.node_count() << " nodes exceed the limit of "
                << limits.max_nodes;
        throw std::invalid_argument(refusal.str());
    }
    if (static_cast<int>(instance.requests().size()) > limits.max_requests) {
        refusal << "brute_force: " << instance.requests().size()
                << " requests exceed the limit of " << limits.max_requests;
        throw std::invalid_argument(refusal.str());
    }
    for (const Request& r : instance.requests()) {
        if (static_cast<int>(r.scenarios.size()) > limits.max_scenarios) {
            refusal << "brute_force: request " << r.id << " has " << r.scenarios.size()
                    << " scenarios, limit " << limits.max_scenarios;
            throw std::invalid_argument(refusal.str());
        }
    }
    for (const Edge& e : instance.edges()) {
        if (e.cap_reserved > limits.max_capacity || e.cap_ondemand > limits.max_capacity) {
            refusal << "brute_force: edge " << e.u << "-" << e.v
                    << " capacity exceeds the limit of " << limits.max_capacity;
            throw std::invalid_argument(refusal.str());
        }
    }

    const CostParams& costs = instance.costs();
    const auto& requests = instance.requests();
    const size_t nreq = requests.size();

    OracleResult result;
    result.solution.method = "oracle";
    if (nreq == 0) {
        result.feasible = true;
        result.solution.status = SolveStatus::optimal;
        result.solution.objective = SpObjective::of(0.0, 0.0);
        result.feasible_count = 1;
        return result;
    }

    // Per-request path lists.
    std::vector<std::vector<OraclePath>> paths(nreq);
    for (size_t r = 0; r < nreq; ++r) {
        paths[r] = all_simple_paths(instance, requests[r].source, requests[r].destination);
        if (paths[r].empty()) {
            result.solution.status = SolveStatus::infeasible;
            result.solution.diagnostic =
                "request " + std::to_string(requests[r].id) + " has no route";
            return result;
        }
    }

    // Per-(edge, request) recourse tables.
    std::map<std::pair<int, int>, PairEval> pair_evals;
    auto pair_eval = [&](int edge, int request) -> const PairEval& {
        auto it = pair_evals.find({edge, request});
        if (it != pair_evals.end()) return it->second;
        const Edge& e = instance.edges()[static_cast<size_t>(edge)];
        PairEval pe;
        for (const Scenario& sc : requests[static_cast<size_t>(request)].scenarios) {
            const double target = std::max(sc.requirement, e.fidelity_threshold);
            pe.demand.push_back(
                pairs_needed(e.base_fidelity, target, e.cap_reserved + e.cap_ondemand));
        }
        pe.cost.assign(static_cast<size_t>(e.cap_reserved) + 1,
                       std::vector<double>(static_cast<size_t>(e.cap_ondemand) + 1, kInf));
        pe.splits.assign(static_cast<size_t>(e.cap_reserved) + 1,
                         std::vector<std::vector<RecourseSplit>>(
                             static_cast<size_t>(e.cap_ondemand) + 1));
        for (int y = 0; y <= e.cap_reserved; ++y) {
            for (int o = 0; o <= e.cap_ondemand; ++o) {
                double expected = 0.0;
                std::vector<RecourseSplit> per_scenario;
                bool ok = true;
                for (size_t w = 0; w < pe.demand.size(); ++w) {
                    if (pe.demand[w] < 0) {
                        ok = false;
                        break;
                    }
                    RecourseSplit s;
                    if (!best_split(pe.demand[w], y, o, costs.utilize_per_pair,
                                    costs.ondemand_per_pair, s)) {
                        ok = false;
                        break;
                    }
                    per_scenario.push_back(s);
                    expected +=
                        requests[static_cast<size_t>(request)].scenarios[w].probability *
                        (costs.utilize_per_pair * s.utilized +
                         costs.ondemand_per_pair * s.ondemand);
                }
                if (!ok) continue;
                pe.cost[static_cast<size_t>(y)][static_cast<size_t>(o)] = expected;
                pe.splits[static_cast<size_t>(y)][static_cast<size_t>(o)] =
                    std::move(per_scenario);
            }
        }
        return pair_evals.emplace(std::make_pair(edge, request), std::move(pe)).first->second;
    };

    // Best joint allocation of one edge among the requests crossing it:
    // enumerate every split of the reserved pool and of the on-demand pool.
    std::map<std::pair<int, std::vector<int>>, EdgeBest> edge_bests;
    auto edge_best = [&](int edge, const std::vector<int>& users) -> const EdgeBest& {
        auto it = edge_bests.find({edge, users});
        if (it != edge_bests.end()) return it->second;
        const Edge& e = instance.edges()[static_cast<size_t>(edge)];
        const int n = static_cast<int>(users.size());
        std::vector<const PairEval*> evals;
        for (int r : users) evals.push_back(&pair_eval(edge, r));

        EdgeBest best;
        std::vector<int> y(static_cast<size_t>(n), 0);
        std::vector<int> o(static_cast<size_t>(n), 0);
        std::function<void(int, int)> scan_o;
        std::function<void(int, int)> scan_y = [&](int i, int c_rem) {
            if (i < n) {
                for (int yi = 0; yi <= c_rem; ++yi) {
                    y[static_cast<size_t>(i)] = yi;
                    scan_y(i + 1, c_rem - yi);
                }
                return;
            }
            scan_o(0, e.cap_ondemand);
        };
        scan_o = [&](int i, int o_rem) {
            if (i < n) {
                for (int oi = 0; oi <= o_rem; ++oi) {
                    o[static_cast<size_t>(i)] = oi;
                    scan_o(i + 1, o_rem - oi);
                }
                return;
            }
            double total = 0.0;
            for (int j = 0; j < n; ++j) {
                const double rec = evals[static_cast<size_t>(j)]
                                       ->cost[static_cast<size_t>(y[static_cast<size_t>(j)])]
                                             [static_cast<size_t>(o[static_cast<size_t>(j)])];
                if (!std::isfinite(rec)) return;
                total += costs.reserve_per_pair * y[static_cast<size_t>(j)] + rec;
            }
            best.feasible_candidates++;
            if (!best.feasible || total < best.cost - 1e-12) {
                best.feasible = true;
                best.cost = total;
                best.reserved.assign(y.begin(), y.end());
                best.splits.clear();
                for (int j = 0; j < n; ++j) {
                    best.splits.push_back(
                        evals[static_cast<size_t>(j)]
                            ->splits[static_cast<size_t>(y[static_cast<size_t>(j)])]
                                    [static_cast<size_t>(o[static_cast<size_t>(j)])]);
                }
            }
        };
        scan_y(0, e.cap_reserved);
        return edge_bests.emplace(std::make_pair(edge, users), std::move(best)).first->second;
    };

    // Walk every path combination.
    std::vector<size_t> pick(nreq, 0);
    double best_total = kInf;
    std::vector<size_t> best_pick;
    std::vector<std::pair<int, std::vector<int>>> best_used;

    bool more = true;
    while (more) {
        std::map<int, std::vector<int>> users_by_edge;
        double node_cost = 0.0;
        for (size_t r = 0; r < nreq; ++r) {
            const OraclePath& p = paths[r][pick[r]];
            for (size_t h = 0; h < p.edges.size(); ++h) {
                users_by_edge[p.edges[h]].push_back(static_cast<int>(r));
                node_cost += costs.node_cost(p.nodes[h + 1]);
            }
        }
        double total = node_cost;
        bool ok = true;
        for (const auto& [edge, users] : users_by_edge) {
            const EdgeBest& eb = edge_best(edge, users);
            if (!eb.feasible) {
                ok = false;
                break;
            }
            total += eb.cost;
        }
        if (ok) {
            result.feasible_count++;
            if (total < best_total - 1e-12) {
                best_total = total;
                best_pick = pick;
                best_used.assign(users_by_edge.begin(), users_by_edge.end());
            }
        }

        // next combination
        size_t r = 0;
        while (r < nreq) {
            if (++pick[r] < paths[r].size()) break;
            pick[r] = 0;
            ++r;
        }
        more = r < nreq;
    }

    for (const auto& entry : edge_bests) result.feasible_count += entry.second.feasible_candidates;

    if (best_pick.empty() && !std::isfinite(best_total)) {
        result.solution.status = SolveStatus::infeasible;
        result.solution.diagnostic = "no feasible combination of routes and allocations";
        return result;
    }

    // Rebuild the winning assignment into a Solution.
    result.feasible = true;
    result.cost = best_total;
    result.solution.status = SolveStatus::optimal;
    double stage1 = 0.0;
    double stage2 = 0.0;
    std::map<std::pair<int, int>, std::pair<int, std::vector<RecourseSplit>>> alloc_of;
    for (const auto& [edge, users] : best_used) {
        const EdgeBest& eb = edge_best(edge, users);
        for (size_t j = 0; j < users.size(); ++j) {
            alloc_of[{edge, users[j]}] = {eb.reserved[j], eb.splits[j]};
        }
    }
    for (size_t r = 0; r < nreq; ++r) {
        const OraclePath& p = paths[r][best_pick[r]];
        RequestPlan plan;
        plan.request = static_cast<int>(r);
        plan.path = p.nodes;
        for (size_t h = 0; h < p.edges.size(); ++h) {
            auto [reserved, splits] = alloc_of[{p.edges[h], static_cast<int>(r)}];
            EdgeAllocation alloc;
            alloc.edge = p.edges[h];
            alloc.reserved = reserved;
            alloc.splits = std::move(splits);
            stage1 += costs.node_cost(p.nodes[h + 1]) + costs.reserve_per_pair * reserved;
            for (size_t w = 0; w < alloc.splits.size(); ++w) {
                stage2 += requests[r].scenarios[w].probability *
                          (costs.utilize_per_pair * alloc.splits[w].utilized +
                           costs.ondemand_per_pair * alloc.splits[w].ondemand);
            }
            plan.edges.push_back(std::move(alloc));
        }
        result.solution.plans.push_back(std::move(plan));
    }
    result.solution.objective = SpObjective::of(stage1, stage2);
    return result;
}

} // namespace qnet
