#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qnet/instance.hpp"
#include "qnet/purification.hpp"
#include "qnet/solution.hpp"

namespace qnet {

/// Knobs shared by model compilation, evaluation, and the solvers.
struct SolverOptions {
    int max_paths = 200;          // per-request simple-path budget
    bool joint_scenarios = false; // enforce on-demand capacity over the scenario product space
    bool per_pair_node_cost = false; // charge node energy/setup per reserved pair instead of per use
    double time_limit_seconds = 0.0; // 0 = no limit
    int threads = 1;                 // parallelism for experiment sweeps
    std::optional<int> forced_total_reservation; // pin sum of reserved pairs (reservation sweep)
};

/// Identifies one compiled demand entry that no pair count can satisfy.
struct UnreachableDemand {
    int edge = -1;
    int request = -1;
    int scenario = -1; // index into the request's scenario list
};

/// Deterministic equivalent of the two-stage program. Routing variables are
/// directional; reservation variables live per (edge, request); recourse
/// variables per (edge, request, scenario). The fidelity constraints are
/// compiled into integer lower bounds: on a used edge, utilized + on-demand
/// pairs must reach demand(edge, request, scenario).
class SpModel {
public:
    SpModel(const NetworkInstance& instance, SolverOptions options);

    const NetworkInstance& instance() const { return *instance_; }
    const SolverOptions& options() const { return options_; }

    /// Minimum pairs on `edge` so the chained fidelity meets
    /// max(requirement of scenario, edge threshold); nullopt if unreachable
    /// within the edge's combined reserved + on-demand capacity.
    std::optional<int> demand(int edge, int request, int scenario) const {
        return demands_[index(edge, request, scenario)];
    }

    /// Largest demand over the request's scenarios, nullopt if any scenario
    /// is unreachable on the edge (such edges are unusable for the request).
    std::optional<int> max_demand(int edge, int request) const;

    bool edge_usable(int edge, int request) const { return usable_[usable_index(edge, request)]; }

    const PurificationTable& table(int edge) const { return tables_[static_cast<size_t>(edge)]; }

    /// False when some request cannot reach its destination through usable
    /// edges; diagnostics() then names a witness per blocked request.
    bool structurally_feasible() const { return blocked_requests_.empty(); }
    const std::vector<int>& blocked_requests() const { return blocked_requests_; }
    const std::vector<UnreachableDemand>& diagnostics() const { return diagnostics_; }

    // Variable counts of the deterministic equivalent.
    int num_route_vars() const;     // directed x per (edge direction, request)
    int num_reserve_vars() const;   // y_r per (edge, request)
    int num_utilize_vars() const;   // y_e per (edge, request, scenario)
    int num_ondemand_vars() const;  // y_o per (edge, request, scenario)

    /// Human-readable LP-style listing, one constraint per line, stable
    /// ordering. Debug aid and escape hatch toward external MILP solvers.
    void dump_lp(std::ostream& out) const;

private:
    const NetworkInstance* instance_;
    SolverOptions options_;
    std::vector<PurificationTable> tables_;
    std::vector<std::optional<int>> demands_; // [edge][request][scenario] flattened
    std::vector<char> usable_;                // [edge][request]
    std::vector<int> scenario_offset_;        // per request, offset into flattened scenario axis
    int total_scenarios_ = 0;
    std::vector<int> blocked_requests_;
    std::vector<UnreachableDemand> diagnostics_;

    size_t index(int edge, int request, int scenario) const {
        return static_cast<size_t>(edge) * static_cast<size_t>(total_scenarios_) +
               static_cast<size_t>(scenario_offset_[static_cast<size_t>(request)]) +
               static_cast<size_t>(scenario);
    }
    size_t usable_index(int edge, int request) const {
        return static_cast<size_t>(edge) * instance_->requests().size() +
               static_cast<size_t>(request);
    }
};

/// Decodes a scenario combination index into one scenario index per
/// participating request (mixed radix, last request varies fastest). This
/// fixes the enumeration order shared by joint-mode solving and evaluation.
void scenario_combo_digits(const std::vector<int>& radices, long long combo,
                           std::vector<int>& digits);

/// One violated-constraint report from evaluate(). Constraint names:
/// source-outflow, destination-inflow, flow-conservation, no-loop,
/// reserve-capacity, link-reserve, utilization-bound, fidelity-demand,
/// ondemand-capacity, dimension, nonnegative.
struct FeasibilityReport {
    bool feasible = false;
    std::string violated;   // first violated constraint, empty when feasible
    SpObjective objective;  // recomputed independently of any solver
};

/// Recomputes every constraint and both cost stages for `solution` from
/// scratch. Accepts output from any solver in this project; reports the
/// first violated constraint otherwise. Throws std::invalid_argument on
/// dimension mismatch with the instance.
FeasibilityReport evaluate(const Solution& solution, const NetworkInstance& instance,
                           const SolverOptions& options = {});

} // namespace qnet
