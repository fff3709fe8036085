#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnet/experiments.hpp"
#include "qnet/instance.hpp"
#include "qnet/model.hpp"
#include "qnet/solution.hpp"
#include "qnet/solver.hpp"

namespace {

std::string options_echo(const qnet::SolverOptions& opt) {
    std::ostringstream s;
    s << "options: max_paths=" << opt.max_paths
      << " joint_scenarios=" << (opt.joint_scenarios ? 1 : 0)
      << " per_pair_node_cost=" << (opt.per_pair_node_cost ? 1 : 0)
      << " threads=" << opt.threads << " time_limit=" << opt.time_limit_seconds;
    return s.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write to " + out_path);
    out << text;
}

std::string fixed6(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << v;
    return s.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact planner for entangled-pair reservation and fidelity-aware routing"};
    app.require_subcommand(1);
    app.fallthrough();

    qnet::SolverOptions options;
    app.add_option("--max-paths", options.max_paths, "simple-path budget per request")
        ->capture_default_str();
    app.add_flag("--joint-scenarios", options.joint_scenarios,
                 "enforce the on-demand pool per scenario combination (max 3 requests)");
    app.add_flag("--per-pair-node-cost", options.per_pair_node_cost,
                 "charge node energy/setup per reserved pair instead of per activation");
    app.add_option("--threads", options.threads, "parallel workers for sweep points")
        ->capture_default_str();
    app.add_option("--time-limit", options.time_limit_seconds,
                   "seconds before the search returns its incumbent (0 = none)")
        ->capture_default_str();

    std::string out_path;

    auto* solve_cmd = app.add_subcommand("solve", "solve one instance and print the plan as JSON");
    std::string solve_instance;
    std::string dump_lp_path;
    solve_cmd->add_option("instance", solve_instance, "instance file")->required();
    solve_cmd->add_option("--out", out_path, "write the JSON here instead of stdout");
    solve_cmd->add_option("--dump-lp", dump_lp_path,
                          "also write the compiled constraint listing to this file");

    auto* fid_cmd =
        app.add_subcommand("sweep-fidelity", "resolve the instance across a requirement grid");
    std::string fid_instance;
    qnet::FidelitySweepParams fid_params;
    fid_cmd->add_option("instance", fid_instance, "instance file")->required();
    fid_cmd->add_option("--from", fid_params.from, "first requirement")->required();
    fid_cmd->add_option("--to", fid_params.to, "last requirement")->required();
    fid_cmd->add_option("--step", fid_params.step, "grid step")->required();
    fid_cmd->add_option("--out", out_path, "write the CSV here instead of stdout");

    auto* res_cmd = app.add_subcommand("sweep-reservation",
                                       "resolve the instance for each forced reservation total");
    std::string res_instance;
    qnet::ReservationSweepParams res_params;
    res_cmd->add_option("instance", res_instance, "instance file")->required();
    res_cmd->add_option("--from", res_params.from, "first reservation total")->required();
    res_cmd->add_option("--to", res_params.to, "last reservation total")->required();
    res_cmd->add_option("--out", out_path, "write the CSV here instead of stdout");

    auto* cmp_cmd = app.add_subcommand(
        "compare-models", "price sampled requests under the sp / evp / perfect-info models");
    std::string cmp_instance;
    std::string cmp_topology;
    qnet::CompareParams cmp_params;
    cmp_cmd->add_option("instance", cmp_instance, "network file (requests are resampled)");
    cmp_cmd->add_option("--topology", cmp_topology,
                        "built-in network instead of a file: nsfnet, line(k), grid(a,b)");
    cmp_cmd->add_option("--requests", cmp_params.request_counts, "request counts, e.g. 2,3,4")
        ->required()
        ->delimiter(',');
    cmp_cmd->add_option("--seed", cmp_params.seed, "sampling seed")->capture_default_str();
    cmp_cmd->add_option("--samples", cmp_params.samples, "instances sampled per request count")
        ->capture_default_str();
    cmp_cmd->add_option("--grid-step", cmp_params.grid_step, "requirement grid step")
        ->capture_default_str();
    cmp_cmd->add_option("--f-max", cmp_params.f_max, "top of the requirement grid")
        ->capture_default_str();
    cmp_cmd->add_option("--out", out_path, "write the CSV here instead of stdout");

    auto* orc_cmd = app.add_subcommand(
        "oracle-check", "certify the solver against the brute-force reference on a small instance");
    std::string orc_instance;
    orc_cmd->add_option("instance", orc_instance, "instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            const qnet::NetworkInstance instance = qnet::load_instance(solve_instance);
            if (!dump_lp_path.empty()) {
                std::ofstream lp(dump_lp_path);
                if (!lp) throw std::runtime_error("cannot write to " + dump_lp_path);
                qnet::SpModel(instance, options).dump_lp(lp);
            }
            const qnet::Solution sol = qnet::solve_sp(instance, options);
            emit(qnet::solution_to_json(sol, instance), out_path);
            std::cerr << "solve: " << (sol.feasible() ? "optimal" : "infeasible") << " in "
                      << fixed6(sol.stats.elapsed_seconds) << "s, "
                      << sol.stats.nodes_explored << " nodes\n";
            return sol.feasible() ? 0 : 2;
        }
        if (fid_cmd->parsed()) {
            const qnet::NetworkInstance instance = qnet::load_instance(fid_instance);
            const auto rows = qnet::run_sweep_fidelity(instance, fid_params, options);
            std::ostringstream csv;
            qnet::write_fidelity_csv(
                csv, rows,
                {"command: sweep-fidelity", "instance: " + fid_instance,
                 "from: " + fixed6(fid_params.from) + " to: " + fixed6(fid_params.to) +
                     " step: " + fixed6(fid_params.step),
                 options_echo(options)});
            emit(csv.str(), out_path);
            return 0;
        }
        if (res_cmd->parsed()) {
            const qnet::NetworkInstance instance = qnet::load_instance(res_instance);
            const auto rows = qnet::run_sweep_reservation(instance, res_params, options);
            std::ostringstream csv;
            qnet::write_reservation_csv(
                csv, rows,
                {"command: sweep-reservation", "instance: " + res_instance,
                 "from: " + std::to_string(res_params.from) +
                     " to: " + std::to_string(res_params.to),
                 options_echo(options)});
            emit(csv.str(), out_path);
            return 0;
        }
        if (cmp_cmd->parsed()) {
            if (cmp_instance.empty() == cmp_topology.empty()) {
                std::cerr << "compare-models: give exactly one of <instance> or --topology\n";
                return 1;
            }
            qnet::NetworkInstance network;
            if (cmp_instance.empty()) {
                // Bare topologies carry no prices; apply the demonstration set.
                const qnet::NetworkInstance topo = qnet::builtin_topology(cmp_topology);
                qnet::CostParams costs;
                costs.energy_per_node = 5.0;
                costs.repeater_setup = 150.0;
                costs.reserve_per_pair = 10.0;
                costs.utilize_per_pair = 1.0;
                costs.ondemand_per_pair = 200.0;
                network = qnet::NetworkInstance(topo.node_count(), topo.edges(), {}, costs);
            } else {
                network = qnet::load_instance(cmp_instance);
            }
            const auto rows = qnet::run_compare_models(network, cmp_params, options);
            std::ostringstream requests_echo;
            for (size_t i = 0; i < cmp_params.request_counts.size(); ++i) {
                requests_echo << (i ? "," : "") << cmp_params.request_counts[i];
            }
            std::ostringstream csv;
            qnet::write_compare_csv(
                csv, rows,
                {"command: compare-models",
                 "network: " + (cmp_instance.empty() ? cmp_topology : cmp_instance),
                 "requests: " + requests_echo.str() + " seed: " + std::to_string(cmp_params.seed) +
                     " samples: " + std::to_string(cmp_params.samples),
                 "grid_step: " + fixed6(cmp_params.grid_step) + " f_max: " + fixed6(cmp_params.f_max),
                 options_echo(options)});
            emit(csv.str(), out_path);
            return 0;
        }
        if (orc_cmd->parsed()) {
            const qnet::NetworkInstance instance = qnet::load_instance(orc_instance);
            const qnet::OracleCheck check = qnet::oracle_check(instance, options);
            std::ostringstream report;
            report << "solver: " << check.solver_status << " cost "
                   << fixed6(check.solver_cost) << "\n"
                   << "oracle: " << check.oracle_status << " cost "
                   << fixed6(check.oracle_cost) << "\n"
                   << "match: " << (check.match ? "yes" : "no") << "\n";
            std::cout << report.str();
            return check.match ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
