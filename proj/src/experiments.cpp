#include "qnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qnet/oracle.hpp"
#include "qnet/rng.hpp"
#include "qnet/solver.hpp"

namespace qnet {

namespace {

// Runs fn(0..n-1) on `threads` workers, index-striped; every point writes
// only its own output slot, so the result is order-independent.
void parallel_points(int n, int threads, const std::function<void(int)>& fn) {
    const int workers = std::max(1, std::min(threads, n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += workers) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

NetworkInstance pin_requirement(const NetworkInstance& instance, double requirement) {
    std::vector<Request> pinned;
    for (const Request& r : instance.requests()) {
        Request p = r;
        p.scenarios = {Scenario{requirement, 1.0}};
        pinned.push_back(std::move(p));
    }
    return NetworkInstance(instance.node_count(), instance.edges(), std::move(pinned),
                           instance.costs());
}

void write_header(std::ostream& out, const std::vector<std::string>& config_echo) {
    for (const std::string& line : config_echo) out << "# " << line << "\n";
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << v;
    return s.str();
}

} // namespace

std::vector<FidelityRow> run_sweep_fidelity(const NetworkInstance& instance,
                                            const FidelitySweepParams& params,
                                            const SolverOptions& options) {
    if (instance.requests().empty()) {
        throw std::invalid_argument("sweep-fidelity: instance has no requests");
    }
    if (params.step <= 0.0) throw std::invalid_argument("sweep-fidelity: step must be positive");
    if (params.from > params.to) throw std::invalid_argument("sweep-fidelity: from exceeds to");
    if (params.from <= 0.0 || params.to >= 1.0) {
        throw std::invalid_argument("sweep-fidelity: requirements must lie in (0, 1)");
    }

    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double f = params.from + params.step * i;
        if (f > params.to + 1e-12) break;
        grid.push_back(f);
    }

    std::vector<FidelityRow> rows(grid.size());
    parallel_points(static_cast<int>(grid.size()), options.threads, [&](int i) {
        FidelityRow& row = rows[static_cast<size_t>(i)];
        row.requirement = grid[static_cast<size_t>(i)];
        const NetworkInstance point = pin_requirement(instance, row.requirement);
        const Solution sol = solve_sp(point, options);
        if (!sol.feasible()) {
            row.status = "infeasible";
            return;
        }
        row.status = "optimal";
        for (const RequestPlan& plan : sol.plans) {
            for (const EdgeAllocation& alloc : plan.edges) {
                row.reserved += alloc.reserved;
                for (const RecourseSplit& s : alloc.splits) {
                    row.utilized += s.utilized;
                    row.ondemand += s.ondemand;
                }
            }
        }
        for (const JointEdgeRecourse& jr : sol.joint_recourse) {
            for (const auto& combo : jr.by_combo) {
                for (const RecourseSplit& s : combo) {
                    row.utilized += s.utilized;
                    row.ondemand += s.ondemand;
                }
            }
        }
    });
    return rows;
}

std::vector<ReservationRow> run_sweep_reservation(const NetworkInstance& instance,
                                                  const ReservationSweepParams& params,
                                                  const SolverOptions& options) {
    if (instance.requests().empty()) {
        throw std::invalid_argument("sweep-reservation: instance has no requests");
    }
    if (params.from < 0 || params.from > params.to) {
        throw std::invalid_argument("sweep-reservation: invalid range");
    }
    long long cap_sum = 0;
    for (const Edge& e : instance.edges()) cap_sum += e.cap_reserved;
    if (params.to > cap_sum) {
        throw std::invalid_argument(
            "sweep-reservation: range exceeds the total reservable capacity of " +
            std::to_string(cap_sum));
    }

    const int n = params.to - params.from + 1;
    std::vector<ReservationRow> rows(static_cast<size_t>(n));
    parallel_points(n, options.threads, [&](int i) {
        ReservationRow& row = rows[static_cast<size_t>(i)];
        row.forced = params.from + i;
        SolverOptions point_options = options;
        point_options.forced_total_reservation = row.forced;
        const Solution sol = solve_sp(instance, point_options);
        if (!sol.feasible()) {
            row.status = "infeasible";
            return;
        }
        row.status = "optimal";
        row.stage1 = sol.objective.stage1;
        row.stage2 = sol.objective.stage2;
        row.total = sol.objective.total;
    });
    return rows;
}

std::vector<CompareRow> run_compare_models(const NetworkInstance& network,
                                           const CompareParams& params,
                                           const SolverOptions& options) {
    if (params.request_counts.empty()) {
        throw std::invalid_argument("compare-models: no request counts given");
    }
    if (params.samples < 1) throw std::invalid_argument("compare-models: samples must be >= 1");
    if (network.node_count() < 2) {
        throw std::invalid_argument("compare-models: network needs at least 2 nodes");
    }
    for (int n : params.request_counts) {
        if (n < 1) throw std::invalid_argument("compare-models: request counts must be >= 1");
    }

    double threshold = 0.0;
    for (const Edge& e : network.edges()) {
        threshold = std::max(threshold, e.fidelity_threshold);
    }
    std::vector<Scenario> scenario_set;
    for (double f : scenario_grid(params.grid_step, params.f_max)) {
        if (f >= threshold - 1e-12 && f > 0.0) scenario_set.push_back(Scenario{f, 0.0});
    }
    if (scenario_set.empty()) {
        throw std::invalid_argument("compare-models: requirement grid is empty");
    }
    for (Scenario& s : scenario_set) s.probability = 1.0 / static_cast<double>(scenario_set.size());

    // All sampling happens up front on one seeded stream; the solves can
    // then run in any order.
    Rng rng(params.seed);
    std::vector<NetworkInstance> sampled; // request_counts-major, then samples
    for (int count : params.request_counts) {
        for (int s = 0; s < params.samples; ++s) {
            std::vector<Request> requests;
            for (int i = 0; i < count; ++i) {
                Request r;
                r.id = i;
                r.source = rng.uniform_int(0, network.node_count() - 1);
                const int d = rng.uniform_int(0, network.node_count() - 2);
                r.destination = d >= r.source ? d + 1 : d;
                r.scenarios = scenario_set;
                requests.push_back(std::move(r));
            }
            sampled.emplace_back(network.node_count(), network.edges(), std::move(requests),
                                 network.costs());
        }
    }

    struct PointResult {
        bool ok = false;
        double sp = 0.0;
        double evp = 0.0;
        double ws = 0.0;
    };
    std::vector<PointResult> points(sampled.size());
    parallel_points(static_cast<int>(sampled.size()), options.threads, [&](int i) {
        const NetworkInstance& inst = sampled[static_cast<size_t>(i)];
        PointResult& pr = points[static_cast<size_t>(i)];
        const Solution sp = solve_sp(inst, options);
        if (!sp.feasible()) return;
        const Solution evp = solve_evp(inst, options);
        if (!evp.feasible()) return;
        const WaitAndSee ws = solve_perfect_info(inst, options);
        if (!ws.feasible) return;
        pr.ok = true;
        pr.sp = sp.objective.total;
        pr.evp = evp.objective.total;
        pr.ws = ws.expected_cost;
    });

    std::vector<CompareRow> rows;
    size_t at = 0;
    for (int count : params.request_counts) {
        CompareRow row;
        row.n_requests = count;
        bool all_ok = true;
        for (int s = 0; s < params.samples; ++s, ++at) {
            const PointResult& pr = points[at];
            all_ok = all_ok && pr.ok;
            row.cost_sp += pr.sp;
            row.cost_evp += pr.evp;
            row.cost_ws += pr.ws;
        }
        if (!all_ok) {
            row.status = "infeasible";
            row.cost_sp = row.cost_evp = row.cost_ws = row.gap_percent = 0.0;
        } else {
            row.status = "optimal";
            row.cost_sp /= params.samples;
            row.cost_evp /= params.samples;
            row.cost_ws /= params.samples;
            row.gap_percent =
                row.cost_evp > 0.0 ? (row.cost_evp - row.cost_sp) / row.cost_evp * 100.0 : 0.0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

OracleCheck oracle_check(const NetworkInstance& instance, const SolverOptions& options) {
    OracleCheck check;
    const Solution sp = solve_sp(instance, options);
    const OracleResult oracle = brute_force(instance);
    check.solver_status = sp.feasible() ? "optimal" : "infeasible";
    check.oracle_status = oracle.feasible ? "optimal" : "infeasible";
    check.solver_cost = sp.objective.total;
    check.oracle_cost = oracle.cost;
    if (sp.feasible() != oracle.feasible) return check;
    if (!sp.feasible()) {
        check.match = true;
        return check;
    }
    if (std::abs(check.solver_cost - check.oracle_cost) > 1e-9) return check;
    const FeasibilityReport sp_report = evaluate(sp, instance, options);
    const FeasibilityReport oracle_report = evaluate(oracle.solution, instance, options);
    check.match = sp_report.feasible && oracle_report.feasible &&
                  std::abs(sp_report.objective.total - check.solver_cost) <= 1e-9 &&
                  std::abs(oracle_report.objective.total - check.oracle_cost) <= 1e-9;
    return check;
}

void write_fidelity_csv(std::ostream& out, const std::vector<FidelityRow>& rows,
                        const std::vector<std::string>& config_echo) {
    write_header(out, config_echo);
    out << "requirement,status,reserved,utilized,ondemand\n";
    for (const FidelityRow& r : rows) {
        out << fmt(r.requirement) << "," << r.status << "," << r.reserved << "," << r.utilized
            << "," << r.ondemand << "\n";
    }
}

void write_reservation_csv(std::ostream& out, const std::vector<ReservationRow>& rows,
                           const std::vector<std::string>& config_echo) {
    write_header(out, config_echo);
    out << "forced_reservation,status,stage1,stage2,total\n";
    for (const ReservationRow& r : rows) {
        out << r.forced << "," << r.status << "," << fmt(r.stage1) << "," << fmt(r.stage2) << ","
            << fmt(r.total) << "\n";
    }
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows,
                       const std::vector<std::string>& config_echo) {
    write_header(out, config_echo);
    out << "n_requests,status,cost_sp,cost_evp,cost_ws,gap_percent\n";
    for (const CompareRow& r : rows) {
        out << r.n_requests << "," << r.status << "," << fmt(r.cost_sp) << "," << fmt(r.cost_evp)
            << "," << fmt(r.cost_ws) << "," << fmt(r.gap_percent) << "\n";
    }
}

} // namespace qnet
