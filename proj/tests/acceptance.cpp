// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its own wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qnet/experiments.hpp"
#include "qnet/instance.hpp"
#include "qnet/model.hpp"
#include "qnet/oracle.hpp"
#include "qnet/purification.hpp"
#include "qnet/rng.hpp"
#include "qnet/solver.hpp"
#include "test_support.hpp"

using namespace qnet;
using qtest::data_file;
using qtest::line3;
using qtest::random_oracle_instance;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool purification_laws(std::ostringstream& detail) {
    const double c4 = chained_fidelity(0.75, 4);
    if (c4 < 0.986 || c4 > 0.988) {
        detail << "chained_fidelity(0.75, 4) = " << c4;
        return false;
    }
    Rng rng(101);
    for (int i = 0; i < 100; ++i) {
        const double q = rng.uniform_int(1, 999) / 1000.0;
        if (std::abs(purify_step(q, 0.5) - q) > 1e-12) {
            detail << "purify_step(" << q << ", 0.5) != " << q;
            return false;
        }
    }
    for (int i = 1; i <= 100; ++i) {
        for (int j = 1; j <= 100; ++j) {
            const double a = i / 101.0; // grid avoids 0.5 exactly
            const double b = j / 101.0;
            const double p = purify_step(a, b);
            bool ok = true;
            if (a > 0.5 && b > 0.5) {
                ok = p > std::max(a, b);
            } else if (a < 0.5 && b < 0.5) {
                ok = p < std::min(a, b);
            } else {
                ok = p > std::min(a, b) && p < std::max(a, b);
            }
            if (!ok) {
                detail << "improvement law fails at (" << a << ", " << b << ") -> " << p;
                return false;
            }
        }
    }
    return true;
}

bool min_pairs_tightness(std::ostringstream& detail) {
    Rng rng(202);
    for (int t = 0; t < 1000; ++t) {
        const double base = (51 + rng.uniform_int(0, 48)) / 100.0;
        const double target = base + (0.999 - base) * rng.uniform_int(0, 1000) / 1000.0;
        const int cap = 1 + rng.uniform_int(0, 63);
        const std::optional<int> k = min_pairs(base, target, cap);
        if (k) {
            if (*k < 1 || *k > cap || chained_fidelity(base, *k) < target ||
                (*k > 1 && chained_fidelity(base, *k - 1) >= target)) {
                detail << "draw " << t << ": min_pairs(" << base << ", " << target << ", " << cap
                       << ") = " << *k << " is not minimal";
                return false;
            }
        } else if (chained_fidelity(base, cap) >= target) {
            detail << "draw " << t << ": min_pairs(" << base << ", " << target << ", " << cap
                   << ") missed a reachable target";
            return false;
        }
    }
    return true;
}

bool solver_matches_reference(std::ostringstream& detail) {
    int feasible_draws = 0;
    for (std::uint32_t seed = 1; seed <= 200; ++seed) {
        Rng rng(seed);
        const NetworkInstance inst = random_oracle_instance(rng);
        const OracleResult oracle = brute_force(inst);
        const Solution sp = solve_sp(inst);
        if (oracle.feasible != sp.feasible()) {
            detail << "seed " << seed << ": feasibility disagrees (oracle "
                   << (oracle.feasible ? "optimal" : "infeasible") << ", solver "
                   << (sp.feasible() ? "optimal" : "infeasible") << ")";
            return false;
        }
        if (!oracle.feasible) continue;
        ++feasible_draws;
        if (std::abs(oracle.cost - sp.objective.total) > 1e-9) {
            detail << "seed " << seed << ": oracle " << oracle.cost << " vs solver "
                   << sp.objective.total;
            return false;
        }
        const FeasibilityReport oracle_report = evaluate(oracle.solution, inst);
        const FeasibilityReport sp_report = evaluate(sp, inst);
        if (!oracle_report.feasible || !sp_report.feasible ||
            std::abs(oracle_report.objective.total - oracle.cost) > 1e-9 ||
            std::abs(sp_report.objective.total - sp.objective.total) > 1e-9) {
            detail << "seed " << seed << ": a reported optimum failed re-evaluation";
            return false;
        }
    }
    if (feasible_draws < 20) {
        detail << "only " << feasible_draws << " feasible draws";
        return false;
    }
    return true;
}

bool reservation_scan_matches_enumeration(std::ostringstream& detail) {
    Rng rng(404);
    for (int t = 0; t < 500; ++t) {
        NewsvendorProfile profile;
        const int scenarios = 1 + rng.uniform_int(0, 3);
        for (int w = 0; w < scenarios; ++w) profile.demands.push_back(rng.uniform_int(0, 10));
        std::sort(profile.demands.begin(), profile.demands.end());
        std::vector<int> weights;
        int total = 0;
        for (int w = 0; w < scenarios; ++w) {
            weights.push_back(1 + rng.uniform_int(0, 4));
            total += weights.back();
        }
        for (int w = 0; w < scenarios; ++w) {
            profile.probabilities.push_back(static_cast<double>(weights[static_cast<size_t>(w)]) /
                                            total);
        }
        profile.reserve_price = rng.uniform_int(0, 20);
        profile.utilize_price = rng.uniform_int(0, 10);
        profile.ondemand_price = rng.uniform_int(0, 10);
        profile.cap_reserved = rng.uniform_int(0, 10);
        profile.cap_ondemand = rng.uniform_int(0, 10);

        double best = kInf;
        for (int y = 0; y <= profile.cap_reserved; ++y) {
            double cost = profile.reserve_price * y;
            bool feasible = true;
            for (int w = 0; w < scenarios; ++w) {
                double cheapest = kInf;
                for (int ye = 0; ye <= y; ++ye) {
                    for (int yo = 0; yo <= profile.cap_ondemand; ++yo) {
                        if (ye + yo < profile.demands[static_cast<size_t>(w)]) continue;
                        cheapest = std::min(cheapest, profile.utilize_price * ye +
                                                          profile.ondemand_price * yo);
                    }
                }
                if (!std::isfinite(cheapest)) {
                    feasible = false;
                    break;
                }
                cost += profile.probabilities[static_cast<size_t>(w)] * cheapest;
            }
            if (feasible) best = std::min(best, cost);
        }

        const NewsvendorResult result = newsvendor_reserve(profile);
        if (result.feasible != std::isfinite(best)) {
            detail << "draw " << t << ": feasibility disagrees";
            return false;
        }
        if (result.feasible && std::abs(result.expected_cost - best) > 1e-9) {
            detail << "draw " << t << ": scan " << result.expected_cost << " vs enumeration "
                   << best;
            return false;
        }
    }
    return true;
}

bool bounds_bracket_optimum(std::ostringstream& detail) {
    int feasible_draws = 0;
    for (std::uint32_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        const NetworkInstance inst = random_oracle_instance(rng);
        const Solution sp = solve_sp(inst);
        if (!sp.feasible()) continue;
        ++feasible_draws;
        const WaitAndSee ws = solve_perfect_info(inst);
        if (!ws.feasible) {
            detail << "seed " << seed << ": perfect-information bound infeasible on a solvable"
                   << " instance";
            return false;
        }
        if (ws.expected_cost > sp.objective.total + 1e-9) {
            detail << "seed " << seed << ": ws " << ws.expected_cost << " > sp "
                   << sp.objective.total;
            return false;
        }
        const Solution evp = solve_evp(inst);
        if (evp.feasible() && sp.objective.total > evp.objective.total + 1e-9) {
            detail << "seed " << seed << ": sp " << sp.objective.total << " > evp "
                   << evp.objective.total;
            return false;
        }
    }
    if (feasible_draws < 10) {
        detail << "only " << feasible_draws << " feasible draws";
        return false;
    }
    return true;
}

bool reservation_sweep_shape(std::ostringstream& detail) {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    ReservationSweepParams params;
    params.from = 0;
    params.to = 20;
    const std::vector<ReservationRow> rows = run_sweep_reservation(demo, params, {});
    size_t arg_min = 0;
    std::optional<size_t> first_zero_stage2;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != "optimal") {
            detail << "forced total " << rows[i].forced << " is " << rows[i].status;
            return false;
        }
        if (i > 0 && rows[i].stage1 < rows[i - 1].stage1 - 1e-9) {
            detail << "stage1 decreases at forced total " << rows[i].forced;
            return false;
        }
        if (i > 0 && rows[i].stage2 > rows[i - 1].stage2 + 1e-9) {
            detail << "stage2 increases at forced total " << rows[i].forced;
            return false;
        }
        if (rows[i].total < rows[arg_min].total - 1e-9) arg_min = i;
        if (!first_zero_stage2 && rows[i].stage2 <= 1e-12) first_zero_stage2 = i;
    }
    const double unconstrained = solve_sp(demo).objective.total;
    const bool min_at_zero_recourse = first_zero_stage2 && *first_zero_stage2 == arg_min;
    const bool min_is_unconstrained = std::abs(rows[arg_min].total - unconstrained) <= 1e-9;
    if (!min_at_zero_recourse && !min_is_unconstrained) {
        detail << "minimum " << rows[arg_min].total << " at forced total " << rows[arg_min].forced
               << " matches neither the first zero-recourse point nor the optimum "
               << unconstrained;
        return false;
    }
    return true;
}

bool fidelity_sweep_shape(std::ostringstream& detail) {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    FidelitySweepParams params;
    params.from = 0.70;
    params.to = 0.99;
    params.step = 0.01;
    const std::vector<FidelityRow> rows = run_sweep_fidelity(demo, params, {});
    double threshold = 0.0;
    for (const Edge& e : demo.edges()) threshold = std::max(threshold, e.fidelity_threshold);

    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != "optimal") {
            detail << "requirement " << rows[i].requirement << " is " << rows[i].status;
            return false;
        }
        if (i > 0 && (rows[i].reserved < rows[i - 1].reserved ||
                      rows[i].utilized < rows[i - 1].utilized)) {
            detail << "pair totals decrease at requirement " << rows[i].requirement;
            return false;
        }
        if (rows[i].requirement <= threshold + 1e-9 &&
            (rows[i].reserved != rows[0].reserved || rows[i].utilized != rows[0].utilized ||
             rows[i].ondemand != rows[0].ondemand)) {
            detail << "rows below the threshold " << threshold << " are not constant";
            return false;
        }
        if (rows[i].ondemand > 0) {
            // On-demand pairs are only allowed once the reservation pool of
            // such an edge is exhausted.
            NetworkInstance pinned(demo.node_count(), demo.edges(),
                                   [&] {
                                       std::vector<Request> rs = demo.requests();
                                       for (Request& r : rs) {
                                           r.scenarios = {
                                               Scenario{rows[i].requirement, 1.0}};
                                       }
                                       return rs;
                                   }(),
                                   demo.costs());
            const Solution sol = solve_sp(pinned);
            if (!sol.feasible()) {
                detail << "re-solve at requirement " << rows[i].requirement << " failed";
                return false;
            }
            for (const RequestPlan& plan : sol.plans) {
                for (const EdgeAllocation& alloc : plan.edges) {
                    int ondemand = 0;
                    for (const RecourseSplit& s : alloc.splits) ondemand += s.ondemand;
                    const Edge& e = demo.edges()[static_cast<size_t>(alloc.edge)];
                    if (ondemand > 0 && alloc.reserved < e.cap_reserved) {
                        detail << "requirement " << rows[i].requirement << " buys on demand on "
                               << e.u << "-" << e.v << " with " << alloc.reserved << " of "
                               << e.cap_reserved << " pairs reserved";
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

bool expected_value_gap(std::ostringstream& detail) {
    const NetworkInstance network = load_instance(data_file("nsfnet_demo.json"));
    CompareParams params;
    params.request_counts = {2, 3, 4};
    params.seed = 1;
    params.samples = 1;
    const std::vector<CompareRow> rows = run_compare_models(network, params, {});
    double best_gap = -kInf;
    for (const CompareRow& row : rows) {
        if (row.status != "optimal") continue;
        best_gap = std::max(best_gap, row.gap_percent);
        if (row.gap_percent >= 20.0) return true;
    }
    detail << "largest expected-value gap " << best_gap << "% stays below 20%";
    return false;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool reruns_are_byte_identical(std::ostringstream& detail) {
    const std::string binary = QNETPLAN_PATH;
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "qnetplan_acceptance";
    std::filesystem::create_directories(tmp);

    const std::string small = (tmp / "oracle_line.json").string();
    save_instance(line3(0.75, {{0.9, 1.0}}), small);

    struct Command {
        std::string name;
        std::string args;     // {OUT} marks the output file
        bool redirect_stdout; // capture stdout instead of --out
    };
    const std::vector<Command> commands{
        {"solve-demo", "solve " + data_file("demo.json") + " --out {OUT}", false},
        {"solve-backbone", "solve " + data_file("nsfnet.json") + " --out {OUT}", false},
        {"sweep-fidelity",
         "sweep-fidelity " + data_file("demo.json") +
             " --from 0.75 --to 0.95 --step 0.05 --out {OUT}",
         false},
        {"sweep-reservation",
         "sweep-reservation " + data_file("demo.json") + " --from 0 --to 20 --out {OUT}", false},
        {"compare-models",
         "compare-models " + data_file("demo.json") +
             " --requests 1,2 --samples 1 --seed 5 --grid-step 0.05 --out {OUT}",
         false},
        {"oracle-check", "oracle-check " + small, true},
    };

    for (const Command& command : commands) {
        std::string outputs[2];
        for (int pass = 0; pass < 2; ++pass) {
            const std::string out =
                (tmp / (command.name + "_" + std::to_string(pass))).string();
            std::string args = command.args;
            const size_t mark = args.find("{OUT}");
            if (mark != std::string::npos) args.replace(mark, 5, out);
            std::string shell = "\"" + binary + "\" " + args;
            shell += command.redirect_stdout ? " > " + out + " 2>/dev/null" : " >/dev/null 2>&1";
            const int rc = std::system(shell.c_str());
            if (rc != 0) {
                detail << command.name << " exited with " << rc;
                return false;
            }
            outputs[pass] = read_file(out);
            if (outputs[pass].empty()) {
                detail << command.name << " produced no output";
                return false;
            }
        }
        if (outputs[0] != outputs[1]) {
            detail << command.name << " differs between runs";
            return false;
        }
    }
    return true;
}

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::ostringstream&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"purification identities and improvement law", 1.0, purification_laws},
        {"minimal pair counts are tight on both sides", 1.0, min_pairs_tightness},
        {"solver matches the exhaustive reference on 200 instances", 300.0,
         solver_matches_reference},
        {"reservation scan matches exhaustive enumeration on 500 profiles", 30.0,
         reservation_scan_matches_enumeration},
        {"perfect-information and expected-value bounds bracket the optimum", 120.0,
         bounds_bracket_optimum},
        {"reservation sweep is monotone with the minimum at the optimum", 60.0,
         reservation_sweep_shape},
        {"requirement sweep is monotone and buys on demand only at full pools", 60.0,
         fidelity_sweep_shape},
        {"expected-value planning overpays by at least 20% on the backbone", 120.0,
         expected_value_gap},
        {"repeated runs of every command are byte-identical", 180.0, reruns_are_byte_identical},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::ostringstream detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && elapsed > criteria[i].budget_seconds) {
            ok = false;
            detail << "took " << elapsed << "s, budget " << criteria[i].budget_seconds << "s";
        }
        std::printf("[%s] criterion %zu: %s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str());
        if (!ok) {
            ++failures;
            std::fprintf(stderr, "  criterion %zu: %s\n", i + 1, detail.str().c_str());
        }
    }
    return failures == 0 ? 0 : 1;
}
