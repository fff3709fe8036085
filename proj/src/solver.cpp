#include "qnet/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace qnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;

std::vector<int> bfs_distances(const SpModel& model, int request, NodeId start) {
    const NetworkInstance& inst = model.instance();
    std::vector<int> dist(static_cast<size_t>(inst.node_count()),
                          std::numeric_limits<int>::max());
    std::queue<NodeId> frontier;
    dist[static_cast<size_t>(start)] = 0;
    frontier.push(start);
    while (!frontier.empty()) {
        NodeId n = frontier.front();
        frontier.pop();
        for (const auto& [to, edge] : inst.neighbors(n)) {
            if (!model.edge_usable(edge, request)) continue;
            if (dist[static_cast<size_t>(to)] == std::numeric_limits<int>::max()) {
                dist[static_cast<size_t>(to)] = dist[static_cast<size_t>(n)] + 1;
                frontier.push(to);
            }
        }
    }
    return dist;
}

} // namespace

PathSet enumerate_paths(const SpModel& model, int request) {
    const NetworkInstance& inst = model.instance();
    const Request& req = inst.requests()[static_cast<size_t>(request)];
    const int budget = model.options().max_paths;
    if (budget < 1) throw std::invalid_argument("max_paths must be at least 1");

    PathSet out;
    out.request = request;
    for (size_t e = 0; e < inst.edges().size(); ++e) {
        if (!model.edge_usable(static_cast<int>(e), request)) {
            out.blocked_edges.push_back(static_cast<int>(e));
        }
    }

    const std::vector<int> to_dest = bfs_distances(model, request, req.destination);
    if (to_dest[static_cast<size_t>(req.source)] == std::numeric_limits<int>::max()) {
        std::ostringstream msg;
        msg << "request " << req.id << ": no route from node " << req.source << " to node "
            << req.destination << " over edges meeting the fidelity demands; blocked edges:";
        if (out.blocked_edges.empty()) {
            msg << " none (endpoints disconnected)";
        } else {
            for (int e : out.blocked_edges) {
                msg << " " << inst.edges()[static_cast<size_t>(e)].u << "-"
                    << inst.edges()[static_cast<size_t>(e)].v;
            }
        }
        throw std::runtime_error(msg.str());
    }

    // Shortest paths first: one depth-limited DFS per hop count. Neighbor
    // lists are sorted, so each level comes out in lexicographic order. One
    // extra path beyond the budget distinguishes a hit budget from an
    // exactly-full one.
    const int want = budget + 1;
    std::vector<NodeId> stack;
    std::vector<char> on_path(static_cast<size_t>(inst.node_count()), 0);
    std::vector<int> edge_stack;
    bool done = false;

    std::function<void(NodeId, int)> dfs = [&](NodeId node, int limit) {
        if (done) return;
        if (node == req.destination) {
            if (static_cast<int>(edge_stack.size()) == limit) {
                out.paths.push_back(RoutePath{stack, edge_stack});
                if (static_cast<int>(out.paths.size()) == want) done = true;
            }
            return;
        }
        for (const auto& [to, edge] : inst.neighbors(node)) {
            if (done) return;
            if (!model.edge_usable(edge, request)) continue;
            if (on_path[static_cast<size_t>(to)]) continue;
            const int next_len = static_cast<int>(edge_stack.size()) + 1;
            if (to_dest[static_cast<size_t>(to)] == std::numeric_limits<int>::max()) continue;
            if (next_len + to_dest[static_cast<size_t>(to)] > limit) continue;
            stack.push_back(to);
            edge_stack.push_back(edge);
            on_path[static_cast<size_t>(to)] = 1;
            dfs(to, limit);
            on_path[static_cast<size_t>(to)] = 0;
            edge_stack.pop_back();
            stack.pop_back();
        }
    };

    const int max_hops = inst.node_count() - 1;
    for (int limit = to_dest[static_cast<size_t>(req.source)]; limit <= max_hops && !done;
         ++limit) {
        stack.assign(1, req.source);
        on_path.assign(static_cast<size_t>(inst.node_count()), 0);
        on_path[static_cast<size_t>(req.source)] = 1;
        edge_stack.clear();
        dfs(req.source, limit);
    }
    if (static_cast<int>(out.paths.size()) > budget) {
        out.paths.pop_back();
        out.truncated = true;
    }
    return out;
}

NewsvendorResult newsvendor_reserve(const NewsvendorProfile& profile) {
    if (profile.demands.size() != profile.probabilities.size() || profile.demands.empty()) {
        throw std::invalid_argument("newsvendor_reserve: demands and probabilities must align");
    }
    if (!std::is_sorted(profile.demands.begin(), profile.demands.end())) {
        throw std::invalid_argument("newsvendor_reserve: demands must be nondecreasing");
    }
    if (profile.cap_reserved < 0 || profile.cap_ondemand < 0) {
        throw std::invalid_argument("newsvendor_reserve: negative capacity");
    }
    for (int k : profile.demands) {
        if (k < 0) throw std::invalid_argument("newsvendor_reserve: negative demand");
    }

    NewsvendorResult best;
    std::vector<RecourseSplit> splits(profile.demands.size());
    for (int y = 0; y <= profile.cap_reserved; ++y) {
        double cost = profile.reserve_price * y;
        bool ok = true;
        for (size_t w = 0; w < profile.demands.size(); ++w) {
            const int k = profile.demands[w];
            RecourseSplit s;
            if (profile.utilize_price <= profile.ondemand_price) {
                s.utilized = std::min(y, k);
                s.ondemand = k - s.utilized;
            } else {
                s.ondemand = std::min(k, profile.cap_ondemand);
                s.utilized = k - s.ondemand;
            }
            if (s.ondemand > profile.cap_ondemand || s.utilized > y) {
                ok = false;
                break;
            }
            splits[w] = s;
            cost += profile.probabilities[w] *
                    (profile.utilize_price * s.utilized + profile.ondemand_price * s.ondemand);
        }
        if (!ok) continue;
        if (!best.feasible || cost < best.expected_cost - kTieEps) {
            best.feasible = true;
            best.reserved = y;
            best.expected_cost = cost;
            best.splits = splits;
        }
    }
    return best;
}

namespace {

// Demand distribution and effective prices for one (edge, request) pair.
// reserve_price absorbs the per-pair node cost in that mode, which makes it
// direction-dependent; `head` keys the cache accordingly.
struct PairTable {
    std::vector<int> k;
    std::vector<double> p;
    int kmax = 0;
    double rp = 0.0;
    double up = 0.0;
    double op = 0.0;

    int oneed(int y) const { return std::max(0, kmax - y); }

    // Reservation plus expected recourse under caps (y, ocap); +inf when a
    // scenario cannot be covered.
    double cost(int y, int ocap) const {
        if (oneed(y) > ocap) return kInf;
        double total = rp * y;
        for (size_t w = 0; w < k.size(); ++w) {
            int ye;
            int yo;
            if (up <= op) {
                ye = std::min(y, k[w]);
                yo = k[w] - ye;
            } else {
                yo = std::min(k[w], ocap);
                ye = k[w] - yo;
            }
            total += p[w] * (up * ye + op * yo);
        }
        return total;
    }

    void split(int y, int ocap, std::vector<RecourseSplit>& out) const {
        out.clear();
        for (size_t w = 0; w < k.size(); ++w) {
            RecourseSplit s;
            if (up <= op) {
                s.utilized = std::min(y, k[w]);
                s.ondemand = k[w] - s.utilized;
            } else {
                s.ondemand = std::min(k[w], ocap);
                s.utilized = k[w] - s.ondemand;
            }
            out.push_back(s);
        }
    }
};

// One request's use of an edge inside a leaf assignment. `head` is the node
// the hop pays for, taken from the path direction.
struct EdgeUse {
    int request = -1;
    NodeId head = -1;

    auto operator<=>(const EdgeUse&) const = default;
};

// Joint allocation of one edge's reserved/on-demand pools among the
// requests routed over it.
struct AllocResult {
    bool feasible = false;
    double cost = 0.0;
    std::vector<std::pair<int, int>> choices;           // (reserved, ondemand share) per user
    std::vector<std::vector<RecourseSplit>> by_combo;   // joint mode only
};

struct AllocKey {
    int edge = -1;
    std::vector<EdgeUse> users;

    auto operator<=>(const AllocKey&) const = default;
};

struct SolveContext {
    const NetworkInstance& inst;
    const SpModel& model;
    const SolverOptions& opt;
    std::vector<PathSet> path_sets;               // per request
    std::vector<std::vector<double>> path_node_cost; // [r][path], zero in per-pair mode
    std::map<std::tuple<int, int, NodeId>, PairTable> pair_tables;
    std::map<AllocKey, AllocResult> alloc_cache;
    // forced-reservation mode: per (edge, users) table of exact-total costs
    std::map<AllocKey, std::vector<AllocResult>> forced_cache;

    explicit SolveContext(const SpModel& m)
        : inst(m.instance()), model(m), opt(m.options()) {}

    const PairTable& pair_table(int edge, int request, NodeId head) {
        const NodeId key_head = opt.per_pair_node_cost ? head : -1;
        auto it = pair_tables.find({edge, request, key_head});
        if (it != pair_tables.end()) return it->second;
        PairTable t;
        const auto& scenarios = inst.requests()[static_cast<size_t>(request)].scenarios;
        for (size_t w = 0; w < scenarios.size(); ++w) {
            t.k.push_back(*model.demand(edge, request, static_cast<int>(w)));
            t.p.push_back(scenarios[w].probability);
            t.kmax = std::max(t.kmax, t.k.back());
        }
        t.rp = inst.costs().reserve_per_pair;
        if (opt.per_pair_node_cost) t.rp += inst.costs().node_cost(head);
        t.up = inst.costs().utilize_per_pair;
        t.op = inst.costs().ondemand_per_pair;
        return pair_tables.emplace(std::make_tuple(edge, request, key_head), std::move(t))
            .first->second;
    }
};

// Candidate comparison used everywhere ties can appear: cheaper total wins;
// at equal totals the earlier request's own share must be the cheap one
// (reservation rather than on-demand), then smaller reservation, then
// smaller on-demand share.
bool improves(double total, double own, int y, int ocap, double best_total, double best_own,
              int best_y, int best_ocap) {
    if (total < best_total - kTieEps) return true;
    if (total > best_total + kTieEps) return false;
    if (own < best_own - kTieEps) return true;
    if (own > best_own + kTieEps) return false;
    if (y != best_y) return y < best_y;
    return ocap < best_ocap;
}

AllocResult alloc_edge_independent(SolveContext& ctx, int edge, const std::vector<EdgeUse>& users) {
    AllocKey key{edge, users};
    auto hit = ctx.alloc_cache.find(key);
    if (hit != ctx.alloc_cache.end()) return hit->second;

    const Edge& e = ctx.inst.edges()[static_cast<size_t>(edge)];
    const int n = static_cast<int>(users.size());
    const int C = e.cap_reserved;
    const int O = e.cap_ondemand;
    std::vector<const PairTable*> tables;
    for (const EdgeUse& u : users) tables.push_back(&ctx.pair_table(edge, u.request, u.head));

    struct Cell {
        bool computed = false;
        double cost = kInf;
        int y = -1;
        int ocap = -1;
    };
    std::vector<Cell> memo(static_cast<size_t>(n) * static_cast<size_t>(C + 1) *
                           static_cast<size_t>(O + 1));
    auto cell = [&](int i, int c, int o) -> Cell& {
        return memo[(static_cast<size_t>(i) * static_cast<size_t>(C + 1) +
                     static_cast<size_t>(c)) *
                        static_cast<size_t>(O + 1) +
                    static_cast<size_t>(o)];
    };

    std::function<double(int, int, int)> dp = [&](int i, int c, int o) -> double {
        if (i == n) return 0.0;
        Cell& m = cell(i, c, o);
        if (m.computed) return m.cost;
        m.computed = true;
        const PairTable& t = *tables[static_cast<size_t>(i)];
        double best = kInf;
        double best_own = kInf;
        int best_y = -1;
        int best_ocap = -1;
        for (int y = 0; y <= c; ++y) {
            const int lo = t.oneed(y);
            if (lo > o) continue;
            // With utilization at most as expensive as on-demand, extra
            // on-demand share never changes this user's recourse.
            const int hi = t.up <= t.op ? lo : std::min(o, t.kmax);
            for (int ocap = lo; ocap <= hi; ++ocap) {
                const double own = t.cost(y, ocap);
                if (!std::isfinite(own)) continue;
                const double rest = dp(i + 1, c - y, o - ocap);
                if (!std::isfinite(rest)) continue;
                if (improves(own + rest, own, y, ocap, best, best_own, best_y, best_ocap)) {
                    best = own + rest;
                    best_own = own;
                    best_y = y;
                    best_ocap = ocap;
                }
            }
        }
        m.cost = best;
        m.y = best_y;
        m.ocap = best_ocap;
        return best;
    };

    AllocResult result;
    result.cost = dp(0, C, O);
    result.feasible = std::isfinite(result.cost);
    if (result.feasible) {
        int c = C;
        int o = O;
        for (int i = 0; i < n; ++i) {
            const Cell& m = cell(i, c, o);
            result.choices.emplace_back(m.y, m.ocap);
            c -= m.y;
            o -= m.ocap;
        }
    }
    return ctx.alloc_cache.emplace(std::move(key), std::move(result)).first->second;
}

// Scenario-combination recourse on one edge given fixed reservations: fill
// from the cheaper source, then spend any remaining on-demand budget in
// request order when on-demand is the cheaper one. Returns expected recourse
// cost over combinations, or +inf when a combination overruns the pool.
double joint_recourse_given(SolveContext& ctx, int edge, const std::vector<EdgeUse>& users,
                            const std::vector<const PairTable*>& tables,
                            const std::vector<int>& yvec,
                            std::vector<std::vector<RecourseSplit>>* combos_out,
                            std::vector<double>* own_out) {
    const Edge& e = ctx.inst.edges()[static_cast<size_t>(edge)];
    const int n = static_cast<int>(users.size());
    std::vector<int> radices;
    long long combos = 1;
    for (const EdgeUse& u : users) {
        radices.push_back(static_cast<int>(
            ctx.inst.requests()[static_cast<size_t>(u.request)].scenarios.size()));
        combos *= radices.back();
    }
    if (combos_out) combos_out->assign(static_cast<size_t>(combos), {});
    if (own_out) own_out->assign(static_cast<size_t>(n), 0.0);

    const double up = ctx.inst.costs().utilize_per_pair;
    const double op = ctx.inst.costs().ondemand_per_pair;
    double expected = 0.0;
    std::vector<int> digits;
    std::vector<int> yo(static_cast<size_t>(n));
    std::vector<int> kk(static_cast<size_t>(n));
    for (long long c = 0; c < combos; ++c) {
        scenario_combo_digits(radices, c, digits);
        double prob = 1.0;
        long long mandatory = 0;
        for (int i = 0; i < n; ++i) {
            const int r = users[static_cast<size_t>(i)].request;
            const int w = digits[static_cast<size_t>(i)];
            prob *= ctx.inst.requests()[static_cast<size_t>(r)]
                        .scenarios[static_cast<size_t>(w)]
                        .probability;
            kk[static_cast<size_t>(i)] = tables[static_cast<size_t>(i)]->k[static_cast<size_t>(w)];
            yo[static_cast<size_t>(i)] =
                std::max(0, kk[static_cast<size_t>(i)] - yvec[static_cast<size_t>(i)]);
            mandatory += yo[static_cast<size_t>(i)];
        }
        if (mandatory > e.cap_ondemand) return kInf;
        if (up > op) {
            int leftover = e.cap_ondemand - static_cast<int>(mandatory);
            for (int i = 0; i < n && leftover > 0; ++i) {
                const int extra =
                    std::min(kk[static_cast<size_t>(i)] - yo[static_cast<size_t>(i)], leftover);
                yo[static_cast<size_t>(i)] += extra;
                leftover -= extra;
            }
        }
        for (int i = 0; i < n; ++i) {
            const int ye = kk[static_cast<size_t>(i)] - yo[static_cast<size_t>(i)];
            const double contribution = prob * (up * ye + op * yo[static_cast<size_t>(i)]);
            expected += contribution;
            if (own_out) (*own_out)[static_cast<size_t>(i)] += contribution;
            if (combos_out) {
                (*combos_out)[static_cast<size_t>(c)].push_back(
                    RecourseSplit{ye, yo[static_cast<size_t>(i)]});
            }
        }
    }
    return expected;
}

AllocResult alloc_edge_joint(SolveContext& ctx, int edge, const std::vector<EdgeUse>& users) {
    AllocKey key{edge, users};
    auto hit = ctx.alloc_cache.find(key);
    if (hit != ctx.alloc_cache.end()) return hit->second;

    const Edge& e = ctx.inst.edges()[static_cast<size_t>(edge)];
    const int n = static_cast<int>(users.size());
    std::vector<const PairTable*> tables;
    for (const EdgeUse& u : users) tables.push_back(&ctx.pair_table(edge, u.request, u.head));

    AllocResult best;
    std::vector<double> best_own;
    std::vector<int> best_y;
    std::vector<int> yvec(static_cast<size_t>(n), 0);
    std::vector<double> own(static_cast<size_t>(n), 0.0);

    std::function<void(int, int)> scan = [&](int i, int c_rem) {
        if (i < n) {
            for (int y = 0; y <= c_rem; ++y) {
                yvec[static_cast<size_t>(i)] = y;
                scan(i + 1, c_rem - y);
            }
            return;
        }
        double reserve_cost = 0.0;
        for (int j = 0; j < n; ++j) {
            reserve_cost += tables[static_cast<size_t>(j)]->rp * yvec[static_cast<size_t>(j)];
        }
        const double recourse = joint_recourse_given(ctx, edge, users, tables, yvec, nullptr, &own);
        if (!std::isfinite(recourse)) return;
        const double total = reserve_cost + recourse;
        for (int j = 0; j < n; ++j) {
            own[static_cast<size_t>(j)] +=
                tables[static_cast<size_t>(j)]->rp * yvec[static_cast<size_t>(j)];
        }
        bool take = false;
        if (!best.feasible || total < best.cost - kTieEps) {
            take = true;
        } else if (total <= best.cost + kTieEps) {
            for (int j = 0; j < n; ++j) {
                const double a = own[static_cast<size_t>(j)];
                const double b = best_own[static_cast<size_t>(j)];
                if (a < b - kTieEps) {
                    take = true;
                    break;
                }
                if (a > b + kTieEps) break;
                if (yvec[static_cast<size_t>(j)] != best_y[static_cast<size_t>(j)]) {
                    take = yvec[static_cast<size_t>(j)] < best_y[static_cast<size_t>(j)];
                    break;
                }
            }
        }
        if (take) {
            best.feasible = true;
            best.cost = total;
            best_own = own;
            best_y = yvec;
        }
    };
    scan(0, e.cap_reserved);

    if (best.feasible) {
        std::vector<const PairTable*> tbl = tables;
        joint_recourse_given(ctx, edge, users, tbl, best_y, &best.by_combo, nullptr);
        for (int i = 0; i < n; ++i) best.choices.emplace_back(best_y[static_cast<size_t>(i)], 0);
    }
    return ctx.alloc_cache.emplace(std::move(key), std::move(best)).first->second;
}

AllocResult alloc_edge(SolveContext& ctx, int edge, const std::vector<EdgeUse>& users) {
    return ctx.opt.joint_scenarios ? alloc_edge_joint(ctx, edge, users)
                                   : alloc_edge_independent(ctx, edge, users);
}

// Forced-total mode: cost of allocating exactly `t` reserved pairs on the
// edge, for every t, with the on-demand pool split alongside.
const std::vector<AllocResult>& forced_edge_table(SolveContext& ctx, int edge,
                                                  const std::vector<EdgeUse>& users) {
    AllocKey key{edge, users};
    auto hit = ctx.forced_cache.find(key);
    if (hit != ctx.forced_cache.end()) return hit->second;

    const Edge& e = ctx.inst.edges()[static_cast<size_t>(edge)];
    const int n = static_cast<int>(users.size());
    const int C = e.cap_reserved;
    const int O = e.cap_ondemand;
    std::vector<const PairTable*> tables;
    for (const EdgeUse& u : users) tables.push_back(&ctx.pair_table(edge, u.request, u.head));

    struct State {
        double cost = kInf;
        int y = -1;
        int ocap = -1;
    };
    // forward[i][c][o]: cheapest way for the first i users to hold c
    // reserved pairs while leaving o on-demand pairs unclaimed.
    auto idx = [&](int c, int o) {
        return static_cast<size_t>(c) * static_cast<size_t>(O + 1) + static_cast<size_t>(o);
    };
    std::vector<std::vector<State>> forward(
        static_cast<size_t>(n + 1),
        std::vector<State>(static_cast<size_t>(C + 1) * static_cast<size_t>(O + 1)));
    forward[0][idx(0, O)].cost = 0.0;
    for (int i = 0; i < n; ++i) {
        const PairTable& t = *tables[static_cast<size_t>(i)];
        for (int c = 0; c <= C; ++c) {
            for (int o = 0; o <= O; ++o) {
                const State& from = forward[static_cast<size_t>(i)][idx(c, o)];
                if (!std::isfinite(from.cost)) continue;
                for (int y = 0; c + y <= C; ++y) {
                    const int lo = t.oneed(y);
                    if (lo > o) continue;
                    const int hi = t.up <= t.op ? lo : std::min(o, t.kmax);
                    for (int ocap = lo; ocap <= hi; ++ocap) {
                        const double own = t.cost(y, ocap);
                        if (!std::isfinite(own)) continue;
                        State& to = forward[static_cast<size_t>(i) + 1][idx(c + y, o - ocap)];
                        if (from.cost + own < to.cost - kTieEps) {
                            to.cost = from.cost + own;
                            to.y = y;
                            to.ocap = ocap;
                        }
                    }
                }
            }
        }
    }

    std::vector<AllocResult> table(static_cast<size_t>(C + 1));
    for (int t = 0; t <= C; ++t) {
        int best_o = -1;
        double best = kInf;
        for (int o = 0; o <= O; ++o) {
            const State& s = forward[static_cast<size_t>(n)][idx(t, o)];
            if (s.cost < best - kTieEps) {
                best = s.cost;
                best_o = o;
            }
        }
        AllocResult& ar = table[static_cast<size_t>(t)];
        if (best_o < 0) continue;
        ar.feasible = true;
        ar.cost = best;
        ar.choices.assign(static_cast<size_t>(n), {0, 0});
        int c = t;
        int o = best_o;
        for (int i = n; i-- > 0;) {
            const State& s = forward[static_cast<size_t>(i) + 1][idx(c, o)];
            ar.choices[static_cast<size_t>(i)] = {s.y, s.ocap};
            c -= s.y;
            o += s.ocap;
        }
    }
    return ctx.forced_cache.emplace(std::move(key), std::move(table)).first->second;
}

struct LeafOutcome {
    bool feasible = false;
    double cost = 0.0;
    std::vector<std::pair<int, std::vector<EdgeUse>>> used; // edge asc, users asc
    std::vector<AllocResult> allocs;                        // aligned with `used`
};

std::vector<std::pair<int, std::vector<EdgeUse>>> collect_edge_users(
    const SolveContext& ctx, const std::vector<int>& chosen) {
    std::map<int, std::vector<EdgeUse>> by_edge;
    for (size_t r = 0; r < ctx.path_sets.size(); ++r) {
        const RoutePath& path =
            ctx.path_sets[r].paths[static_cast<size_t>(chosen[r])];
        for (size_t h = 0; h < path.edges.size(); ++h) {
            by_edge[path.edges[h]].push_back(
                EdgeUse{static_cast<int>(r), path.nodes[h + 1]});
        }
    }
    return {by_edge.begin(), by_edge.end()};
}

LeafOutcome eval_leaf(SolveContext& ctx, const std::vector<int>& chosen) {
    LeafOutcome out;
    out.used = collect_edge_users(ctx, chosen);
    double cost = 0.0;
    for (size_t r = 0; r < ctx.path_sets.size(); ++r) {
        cost += ctx.path_node_cost[r][static_cast<size_t>(chosen[r])];
    }

    if (!ctx.opt.forced_total_reservation) {
        for (const auto& [edge, users] : out.used) {
            AllocResult ar = alloc_edge(ctx, edge, users);
            if (!ar.feasible) return out;
            cost += ar.cost;
            out.allocs.push_back(std::move(ar));
        }
        out.feasible = true;
        out.cost = cost;
        return out;
    }

    // Forced total: convolve the per-edge exact-total tables to hit the
    // target reservation count across all used edges.
    const int target = *ctx.opt.forced_total_reservation;
    std::vector<const std::vector<AllocResult>*> tables;
    for (const auto& [edge, users] : out.used) {
        tables.push_back(&forced_edge_table(ctx, edge, users));
    }
    const int n_edges = static_cast<int>(tables.size());
    std::vector<std::vector<double>> acc(static_cast<size_t>(n_edges) + 1,
                                         std::vector<double>(static_cast<size_t>(target) + 1, kInf));
    std::vector<std::vector<int>> pick(static_cast<size_t>(n_edges) + 1,
                                       std::vector<int>(static_cast<size_t>(target) + 1, -1));
    acc[0][0] = 0.0;
    for (int j = 0; j < n_edges; ++j) {
        const auto& tab = *tables[static_cast<size_t>(j)];
        for (int t = 0; t <= target; ++t) {
            if (!std::isfinite(acc[static_cast<size_t>(j)][static_cast<size_t>(t)])) continue;
            for (int te = 0; te < static_cast<int>(tab.size()) && t + te <= target; ++te) {
                if (!tab[static_cast<size_t>(te)].feasible) continue;
                const double cand = acc[static_cast<size_t>(j)][static_cast<size_t>(t)] +
                                    tab[static_cast<size_t>(te)].cost;
                double& slot = acc[static_cast<size_t>(j) + 1][static_cast<size_t>(t + te)];
                if (cand < slot - kTieEps) {
                    slot = cand;
                    pick[static_cast<size_t>(j) + 1][static_cast<size_t>(t + te)] = te;
                }
            }
        }
    }
    if (!std::isfinite(acc[static_cast<size_t>(n_edges)][static_cast<size_t>(target)])) return out;
    std::vector<int> per_edge(static_cast<size_t>(n_edges), 0);
    int t = target;
    for (int j = n_edges; j-- > 0;) {
        const int te = pick[static_cast<size_t>(j) + 1][static_cast<size_t>(t)];
        per_edge[static_cast<size_t>(j)] = te;
        t -= te;
    }
    for (int j = 0; j < n_edges; ++j) {
        out.allocs.push_back(
            (*tables[static_cast<size_t>(j)])[static_cast<size_t>(per_edge[static_cast<size_t>(j)])]);
    }
    out.feasible = true;
    out.cost = cost + acc[static_cast<size_t>(n_edges)][static_cast<size_t>(target)];
    return out;
}

double path_node_cost(const SolveContext& ctx, const RoutePath& path) {
    if (ctx.opt.per_pair_node_cost) return 0.0; // folded into the reserve price
    double cost = 0.0;
    for (size_t h = 0; h < path.edges.size(); ++h) {
        cost += ctx.inst.costs().node_cost(path.nodes[h + 1]);
    }
    return cost;
}

// Cost of one request's path with the whole edge pools to itself — the
// capacity-unconstrained relaxation used for bounding.
double independent_path_cost(SolveContext& ctx, int request, const RoutePath& path) {
    double cost = path_node_cost(ctx, path);
    for (size_t h = 0; h < path.edges.size(); ++h) {
        const AllocResult ar =
            alloc_edge(ctx, path.edges[h], {EdgeUse{request, path.nodes[h + 1]}});
        if (!ar.feasible) return kInf;
        cost += ar.cost;
    }
    return cost;
}

void fill_solution_from_leaf(SolveContext& ctx, const std::vector<int>& chosen,
                             const LeafOutcome& leaf, Solution& sol) {
    const auto& requests = ctx.inst.requests();
    sol.plans.assign(requests.size(), {});

    // (edge, request) → (reserved, ocap) from the leaf allocations.
    std::map<std::pair<int, int>, std::pair<int, int>> alloc_of;
    for (size_t i = 0; i < leaf.used.size(); ++i) {
        const auto& [edge, users] = leaf.used[i];
        for (size_t j = 0; j < users.size(); ++j) {
            alloc_of[{edge, users[j].request}] = leaf.allocs[i].choices[j];
        }
    }

    double stage1 = 0.0;
    double stage2 = 0.0;
    std::vector<RecourseSplit> splits;
    for (size_t r = 0; r < requests.size(); ++r) {
        const RoutePath& path = ctx.path_sets[r].paths[static_cast<size_t>(chosen[r])];
        RequestPlan& plan = sol.plans[r];
        plan.request = static_cast<int>(r);
        plan.path = path.nodes;
        for (size_t h = 0; h < path.edges.size(); ++h) {
            const auto [y, ocap] = alloc_of[{path.edges[h], static_cast<int>(r)}];
            EdgeAllocation alloc;
            alloc.edge = path.edges[h];
            alloc.reserved = y;
            const NodeId head = path.nodes[h + 1];
            const double nc = ctx.inst.costs().node_cost(head);
            stage1 += ctx.opt.per_pair_node_cost ? nc * y : nc;
            stage1 += ctx.inst.costs().reserve_per_pair * y;
            if (!ctx.opt.joint_scenarios) {
                ctx.pair_table(path.edges[h], static_cast<int>(r), head).split(y, ocap, splits);
                alloc.splits = splits;
                for (size_t w = 0; w < splits.size(); ++w) {
                    stage2 += requests[r].scenarios[w].probability *
                              (ctx.inst.costs().utilize_per_pair * splits[w].utilized +
                               ctx.inst.costs().ondemand_per_pair * splits[w].ondemand);
                }
            }
            plan.edges.push_back(std::move(alloc));
        }
    }
    if (ctx.opt.joint_scenarios) {
        for (size_t i = 0; i < leaf.used.size(); ++i) {
            const auto& [edge, users] = leaf.used[i];
            JointEdgeRecourse jr;
            jr.edge = edge;
            for (const EdgeUse& u : users) jr.requests.push_back(u.request);
            jr.by_combo = leaf.allocs[i].by_combo;
            std::vector<int> radices;
            for (const EdgeUse& u : users) {
                radices.push_back(static_cast<int>(
                    requests[static_cast<size_t>(u.request)].scenarios.size()));
            }
            std::vector<int> digits;
            for (size_t c = 0; c < jr.by_combo.size(); ++c) {
                scenario_combo_digits(radices, static_cast<long long>(c), digits);
                double prob = 1.0;
                for (size_t j = 0; j < users.size(); ++j) {
                    prob *= requests[static_cast<size_t>(users[j].request)]
                                .scenarios[static_cast<size_t>(digits[j])]
                                .probability;
                }
                for (size_t j = 0; j < users.size(); ++j) {
                    stage2 += prob * (ctx.inst.costs().utilize_per_pair *
                                          jr.by_combo[c][j].utilized +
                                      ctx.inst.costs().ondemand_per_pair *
                                          jr.by_combo[c][j].ondemand);
                }
            }
            sol.joint_recourse.push_back(std::move(jr));
        }
    }
    sol.objective = SpObjective::of(stage1, stage2);
    sol.status = SolveStatus::optimal;
}

std::string blocked_diagnostic(const SpModel& model) {
    const NetworkInstance& inst = model.instance();
    std::ostringstream msg;
    msg << "structurally infeasible:";
    for (int r : model.blocked_requests()) {
        const Request& req = inst.requests()[static_cast<size_t>(r)];
        msg << " request " << req.id << " cannot reach node " << req.destination
            << " (fidelity unreachable on";
        int listed = 0;
        for (const UnreachableDemand& d : model.diagnostics()) {
            if (d.request != r) continue;
            const Edge& e = inst.edges()[static_cast<size_t>(d.edge)];
            if (listed++ == 4) {
                msg << " ...";
                break;
            }
            msg << " " << e.u << "-" << e.v << "[w" << d.scenario << "]";
        }
        msg << ");";
    }
    return msg.str();
}

void check_joint_limits(const NetworkInstance& instance, const SolverOptions& options) {
    if (options.joint_scenarios && instance.requests().size() > 3) {
        throw std::invalid_argument(
            "joint scenario mode enumerates the scenario product space and "
            "supports at most 3 requests");
    }
    if (options.joint_scenarios && options.forced_total_reservation) {
        throw std::invalid_argument(
            "forced total reservation is not supported in joint scenario mode");
    }
}

} // namespace

Solution solve_sp(const NetworkInstance& instance, const SolverOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    check_joint_limits(instance, options);
    SpModel model(instance, options);

    Solution sol;
    sol.method = "sp";
    auto finish = [&](Solution& s) -> Solution& {
        s.stats.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return s;
    };

    if (instance.requests().empty()) {
        sol.status = SolveStatus::optimal;
        sol.objective = SpObjective::of(0.0, 0.0);
        return finish(sol);
    }
    if (!model.structurally_feasible()) {
        sol.status = SolveStatus::infeasible;
        sol.diagnostic = blocked_diagnostic(model);
        return finish(sol);
    }

    SolveContext ctx(model);
    const size_t nreq = instance.requests().size();
    for (size_t r = 0; r < nreq; ++r) {
        ctx.path_sets.push_back(enumerate_paths(model, static_cast<int>(r)));
        sol.stats.truncated = sol.stats.truncated || ctx.path_sets.back().truncated;
        std::vector<double> node_costs;
        for (const RoutePath& p : ctx.path_sets.back().paths) {
            node_costs.push_back(path_node_cost(ctx, p));
        }
        ctx.path_node_cost.push_back(std::move(node_costs));
    }

    // Capacity-unconstrained per-path costs drive both the branch value
    // ordering and the lower bound.
    std::vector<std::vector<double>> ind_cost(nreq);
    std::vector<std::vector<int>> path_order(nreq);
    std::vector<double> ind_min(nreq, kInf);
    for (size_t r = 0; r < nreq; ++r) {
        const auto& paths = ctx.path_sets[r].paths;
        ind_cost[r].resize(paths.size(), kInf);
        for (size_t p = 0; p < paths.size(); ++p) {
            ind_cost[r][p] = independent_path_cost(ctx, static_cast<int>(r), paths[p]);
            ind_min[r] = std::min(ind_min[r], ind_cost[r][p]);
        }
        path_order[r].resize(paths.size());
        for (size_t p = 0; p < paths.size(); ++p) path_order[r][p] = static_cast<int>(p);
        std::stable_sort(path_order[r].begin(), path_order[r].end(), [&](int a, int b) {
            return ind_cost[r][static_cast<size_t>(a)] < ind_cost[r][static_cast<size_t>(b)];
        });
    }

    std::vector<int> order(nreq);
    for (size_t r = 0; r < nreq; ++r) order[r] = static_cast<int>(r);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return ctx.path_sets[static_cast<size_t>(a)].paths.size() <
               ctx.path_sets[static_cast<size_t>(b)].paths.size();
    });
    std::vector<double> rest_min(nreq + 1, 0.0);
    for (size_t d = nreq; d-- > 0;) {
        rest_min[d] = rest_min[d + 1] + ind_min[static_cast<size_t>(order[d])];
    }

    std::vector<int> chosen(nreq, -1);
    std::vector<int> best_chosen;
    double incumbent = kInf;
    bool timed_out = false;
    long long clock_check = 0;
    const bool has_limit = options.time_limit_seconds > 0.0;

    std::function<void(size_t, double)> descend = [&](size_t depth, double relaxed) {
        if (timed_out) return;
        sol.stats.nodes_explored++;
        if (has_limit && (++clock_check & 63) == 0) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (elapsed > options.time_limit_seconds) {
                timed_out = true;
                return;
            }
        }
        if (depth == nreq) {
            sol.stats.leaves_evaluated++;
            const LeafOutcome leaf = eval_leaf(ctx, chosen);
            if (leaf.feasible && leaf.cost < incumbent - kTieEps) {
                incumbent = leaf.cost;
                best_chosen = chosen;
            }
            return;
        }
        const int r = order[depth];
        for (int p : path_order[static_cast<size_t>(r)]) {
            const double lb =
                relaxed + ind_cost[static_cast<size_t>(r)][static_cast<size_t>(p)] +
                rest_min[depth + 1];
            if (lb > incumbent + kTieEps) break; // paths sorted by relaxed cost
            chosen[static_cast<size_t>(r)] = p;
            descend(depth + 1,
                    relaxed + ind_cost[static_cast<size_t>(r)][static_cast<size_t>(p)]);
            chosen[static_cast<size_t>(r)] = -1;
            if (timed_out) return;
        }
    };
    descend(0, 0.0);
    sol.stats.time_limit_hit = timed_out;

    if (best_chosen.empty()) {
        sol.status = SolveStatus::infeasible;
        sol.diagnostic = timed_out ? "time limit reached before any feasible assignment"
                         : options.forced_total_reservation
                             ? "no routing meets the forced reservation total within capacities"
                             : "no routing fits the shared reserved/on-demand capacities";
        return finish(sol);
    }
    const LeafOutcome leaf = eval_leaf(ctx, best_chosen);
    fill_solution_from_leaf(ctx, best_chosen, leaf, sol);
    return finish(sol);
}

namespace {

// Recourse of a frozen stage-1 plan (paths and reservations) against the
// true scenario set. Fills splits / joint recourse in `sol` and returns
// false (with a diagnostic) when a shortfall exceeds the on-demand pool.
bool price_frozen_recourse(SolveContext& ctx, Solution& sol, std::string& diagnostic) {
    const NetworkInstance& inst = ctx.inst;
    const auto& requests = inst.requests();

    // Usability of every frozen hop under the true scenarios.
    for (const RequestPlan& plan : sol.plans) {
        for (const EdgeAllocation& alloc : plan.edges) {
            if (!ctx.model.edge_usable(alloc.edge, plan.request)) {
                const Edge& e = inst.edges()[static_cast<size_t>(alloc.edge)];
                std::ostringstream msg;
                msg << "fidelity unreachable on frozen route: edge " << e.u << "-" << e.v
                    << ", request " << requests[static_cast<size_t>(plan.request)].id;
                diagnostic = msg.str();
                return false;
            }
        }
    }

    std::map<int, std::vector<EdgeUse>> users_by_edge;
    std::map<int, std::vector<int>> yvec_by_edge;
    std::map<std::pair<int, int>, NodeId> head_of;
    for (const RequestPlan& plan : sol.plans) {
        for (size_t h = 0; h < plan.edges.size(); ++h) {
            const int edge = plan.edges[h].edge;
            users_by_edge[edge].push_back(EdgeUse{plan.request, plan.path[h + 1]});
            yvec_by_edge[edge].push_back(plan.edges[h].reserved);
            head_of[{edge, plan.request}] = plan.path[h + 1];
        }
    }

    double stage2 = 0.0;
    if (!ctx.opt.joint_scenarios) {
        for (auto& [edge, users] : users_by_edge) {
            const Edge& e = inst.edges()[static_cast<size_t>(edge)];
            const std::vector<int>& yvec = yvec_by_edge[edge];
            const int n = static_cast<int>(users.size());
            std::vector<const PairTable*> tables;
            for (const EdgeUse& u : users) {
                tables.push_back(&ctx.pair_table(edge, u.request, u.head));
            }
            // Split the on-demand pool among the users: with utilization the
            // cheaper source each user needs exactly its worst shortfall;
            // otherwise a small DP finds the best shares.
            std::vector<int> ocap(static_cast<size_t>(n), 0);
            const double up = inst.costs().utilize_per_pair;
            const double op = inst.costs().ondemand_per_pair;
            if (up <= op) {
                int total = 0;
                for (int i = 0; i < n; ++i) {
                    ocap[static_cast<size_t>(i)] =
                        tables[static_cast<size_t>(i)]->oneed(yvec[static_cast<size_t>(i)]);
                    total += ocap[static_cast<size_t>(i)];
                }
                if (total > e.cap_ondemand) {
                    std::ostringstream msg;
                    msg << "on-demand pool exceeded on edge " << e.u << "-" << e.v
                        << ": frozen reservations leave a shortfall of " << total
                        << " pairs against capacity " << e.cap_ondemand;
                    diagnostic = msg.str();
                    return false;
                }
            } else {
                const int O = e.cap_ondemand;
                std::vector<std::vector<double>> dp(
                    static_cast<size_t>(n) + 1,
                    std::vector<double>(static_cast<size_t>(O) + 1, kInf));
                std::vector<std::vector<int>> pick(
                    static_cast<size_t>(n) + 1, std::vector<int>(static_cast<size_t>(O) + 1, -1));
                dp[0][static_cast<size_t>(O)] = 0.0;
                for (int i = 0; i < n; ++i) {
                    const PairTable& t = *tables[static_cast<size_t>(i)];
                    const int y = yvec[static_cast<size_t>(i)];
                    for (int o = 0; o <= O; ++o) {
                        if (!std::isfinite(dp[static_cast<size_t>(i)][static_cast<size_t>(o)])) {
                            continue;
                        }
                        const int lo = t.oneed(y);
                        const int hi = std::min(o, t.kmax);
                        for (int c = lo; c <= hi; ++c) {
                            const double own = t.cost(y, c) - t.rp * y;
                            const double cand =
                                dp[static_cast<size_t>(i)][static_cast<size_t>(o)] + own;
                            double& slot =
                                dp[static_cast<size_t>(i) + 1][static_cast<size_t>(o - c)];
                            if (cand < slot - kTieEps) {
                                slot = cand;
                                pick[static_cast<size_t>(i) + 1][static_cast<size_t>(o - c)] = c;
                            }
                        }
                    }
                }
                int best_o = -1;
                double best = kInf;
                for (int o = 0; o <= O; ++o) {
                    if (dp[static_cast<size_t>(n)][static_cast<size_t>(o)] < best - kTieEps) {
                        best = dp[static_cast<size_t>(n)][static_cast<size_t>(o)];
                        best_o = o;
                    }
                }
                if (best_o < 0) {
                    const Edge& ee = inst.edges()[static_cast<size_t>(edge)];
                    std::ostringstream msg;
                    msg << "on-demand pool exceeded on edge " << ee.u << "-" << ee.v;
                    diagnostic = msg.str();
                    return false;
                }
                int o = best_o;
                for (int i = n; i-- > 0;) {
                    const int c = pick[static_cast<size_t>(i) + 1][static_cast<size_t>(o)];
                    ocap[static_cast<size_t>(i)] = c;
                    o += c;
                }
            }
            for (int i = 0; i < n; ++i) {
                const int r = users[static_cast<size_t>(i)].request;
                RequestPlan& plan = sol.plans[static_cast<size_t>(r)];
                for (EdgeAllocation& alloc : plan.edges) {
                    if (alloc.edge != edge) continue;
                    tables[static_cast<size_t>(i)]->split(yvec[static_cast<size_t>(i)],
                                                          ocap[static_cast<size_t>(i)],
                                                          alloc.splits);
                    for (size_t w = 0; w < alloc.splits.size(); ++w) {
                        stage2 += requests[static_cast<size_t>(r)].scenarios[w].probability *
                                  (up * alloc.splits[w].utilized + op * alloc.splits[w].ondemand);
                    }
                }
            }
        }
    } else {
        for (auto& [edge, users] : users_by_edge) {
            std::vector<const PairTable*> tables;
            for (const EdgeUse& u : users) {
                tables.push_back(&ctx.pair_table(edge, u.request, u.head));
            }
            JointEdgeRecourse jr;
            jr.edge = edge;
            for (const EdgeUse& u : users) jr.requests.push_back(u.request);
            const double expected = joint_recourse_given(ctx, edge, users, tables,
                                                         yvec_by_edge[edge], &jr.by_combo, nullptr);
            if (!std::isfinite(expected)) {
                const Edge& e = inst.edges()[static_cast<size_t>(edge)];
                std::ostringstream msg;
                msg << "on-demand pool exceeded on edge " << e.u << "-" << e.v
                    << " for some scenario combination";
                diagnostic = msg.str();
                return false;
            }
            stage2 += expected;
            sol.joint_recourse.push_back(std::move(jr));
        }
    }

    double stage1 = 0.0;
    for (const RequestPlan& plan : sol.plans) {
        for (size_t h = 0; h < plan.edges.size(); ++h) {
            const double nc = inst.costs().node_cost(plan.path[h + 1]);
            stage1 += ctx.opt.per_pair_node_cost ? nc * plan.edges[h].reserved : nc;
            stage1 += inst.costs().reserve_per_pair * plan.edges[h].reserved;
        }
    }
    sol.objective = SpObjective::of(stage1, stage2);
    return true;
}

} // namespace

Solution solve_evp(const NetworkInstance& instance, const SolverOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    check_joint_limits(instance, options);

    std::vector<Request> mean_requests;
    for (const Request& r : instance.requests()) {
        Request m = r;
        m.scenarios = {Scenario{r.expected_requirement(), 1.0}};
        mean_requests.push_back(std::move(m));
    }
    NetworkInstance mean_instance(instance.node_count(), instance.edges(),
                                  std::move(mean_requests), instance.costs());
    SolverOptions stage1_options = options;
    stage1_options.joint_scenarios = false; // single scenario per request
    Solution stage1 = solve_sp(mean_instance, stage1_options);

    Solution sol;
    sol.method = "evp";
    sol.stats = stage1.stats;
    auto finish = [&](Solution& s) -> Solution& {
        s.stats.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return s;
    };

    if (!stage1.feasible()) {
        sol.status = SolveStatus::infeasible;
        sol.diagnostic = "expected-value stage is infeasible: " + stage1.diagnostic;
        return finish(sol);
    }

    // Freeze routing and reservations, reprice against the true scenarios.
    sol.plans = stage1.plans;
    for (RequestPlan& plan : sol.plans) {
        for (EdgeAllocation& alloc : plan.edges) alloc.splits.clear();
    }
    SpModel model(instance, options);
    SolveContext ctx(model);
    std::string diagnostic;
    if (!price_frozen_recourse(ctx, sol, diagnostic)) {
        sol.status = SolveStatus::infeasible;
        sol.diagnostic = diagnostic;
        sol.plans.clear();
        return finish(sol);
    }
    sol.status = SolveStatus::optimal;
    return finish(sol);
}

WaitAndSee solve_perfect_info(const NetworkInstance& instance, const SolverOptions& options) {
    check_joint_limits(instance, options);
    WaitAndSee ws;
    ws.feasible = true;
    if (instance.requests().empty()) return ws;

    SolverOptions sub_options = options;
    sub_options.joint_scenarios = false; // every component is deterministic

    if (!options.joint_scenarios) {
        // Per-request decomposition with full capacities per solve: both the
        // coupling constraints and the here-and-now restriction are relaxed,
        // so the weighted sum lower-bounds the stochastic optimum without
        // touching the scenario product space.
        for (size_t r = 0; r < instance.requests().size(); ++r) {
            const Request& req = instance.requests()[r];
            for (size_t w = 0; w < req.scenarios.size(); ++w) {
                Request pinned = req;
                pinned.scenarios = {Scenario{req.scenarios[w].requirement, 1.0}};
                NetworkInstance sub(instance.node_count(), instance.edges(), {pinned},
                                    instance.costs());
                WaitAndSee::Component comp;
                comp.fixed = {{static_cast<int>(r), static_cast<int>(w)}};
                comp.probability = req.scenarios[w].probability;
                comp.solution = solve_sp(sub, sub_options);
                comp.solution.method = "perfect-info";
                if (!comp.solution.feasible() && ws.feasible) {
                    ws.feasible = false;
                    std::ostringstream msg;
                    msg << "request " << req.id << ", scenario " << w
                        << " is infeasible even in isolation: " << comp.solution.diagnostic;
                    ws.diagnostic = msg.str();
                }
                ws.expected_cost += comp.probability * comp.solution.objective.total;
                ws.components.push_back(std::move(comp));
            }
        }
    } else {
        std::vector<int> radices;
        long long combos = 1;
        for (const Request& req : instance.requests()) {
            radices.push_back(static_cast<int>(req.scenarios.size()));
            combos *= radices.back();
        }
        std::vector<int> digits;
        for (long long c = 0; c < combos; ++c) {
            scenario_combo_digits(radices, c, digits);
            std::vector<Request> pinned;
            double prob = 1.0;
            WaitAndSee::Component comp;
            for (size_t r = 0; r < instance.requests().size(); ++r) {
                const Request& req = instance.requests()[r];
                Request p = req;
                const auto& sc = req.scenarios[static_cast<size_t>(digits[r])];
                p.scenarios = {Scenario{sc.requirement, 1.0}};
                pinned.push_back(std::move(p));
                prob *= sc.probability;
                comp.fixed.emplace_back(static_cast<int>(r), digits[r]);
            }
            NetworkInstance sub(instance.node_count(), instance.edges(), std::move(pinned),
                                instance.costs());
            comp.probability = prob;
            comp.solution = solve_sp(sub, sub_options);
            comp.solution.method = "perfect-info";
            if (!comp.solution.feasible() && ws.feasible) {
                ws.feasible = false;
                ws.diagnostic =
                    "a scenario combination is infeasible: " + comp.solution.diagnostic;
            }
            ws.expected_cost += prob * comp.solution.objective.total;
            ws.components.push_back(std::move(comp));
        }
    }
    if (!ws.feasible) ws.expected_cost = 0.0;
    return ws;
}

} // namespace qnet
