#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qnet/instance.hpp"
#include "qnet/model.hpp"

namespace qnet {

/// One point of the requirement sweep: every request is pinned to the single
/// requirement and the pair counts are totaled over all edges of the plan.
struct FidelityRow {
    double requirement = 0.0;
    std::string status; // "optimal" or "infeasible"
    long long reserved = 0;
    long long utilized = 0;
    long long ondemand = 0;
};

struct FidelitySweepParams {
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

std::vector<FidelityRow> run_sweep_fidelity(const NetworkInstance& instance,
                                            const FidelitySweepParams& params,
                                            const SolverOptions& options);

/// One point of the reservation sweep: the plan's total reserved pairs are
/// forced to `forced` and the cost split is reported.
struct ReservationRow {
    int forced = 0;
    std::string status;
    double stage1 = 0.0;
    double stage2 = 0.0;
    double total = 0.0;
};

struct ReservationSweepParams {
    int from = 0;
    int to = 0;
};

std::vector<ReservationRow> run_sweep_reservation(const NetworkInstance& instance,
                                                  const ReservationSweepParams& params,
                                                  const SolverOptions& options);

/// One request-count row of the three-way model comparison, averaged over
/// the sampled instances.
struct CompareRow {
    int n_requests = 0;
    std::string status;
    double cost_sp = 0.0;
    double cost_evp = 0.0;
    double cost_ws = 0.0;
    double gap_percent = 0.0; // (evp - sp) / evp * 100
};

struct CompareParams {
    std::vector<int> request_counts;
    std::uint32_t seed = 1;
    int samples = 1;
    double grid_step = 0.01; // requirement grid granularity
    double f_max = 0.99;     // top of the requirement grid
};

/// Samples seeded random requests on the given network (endpoints uniform,
/// requirement uniform over the grid between the fidelity threshold and
/// f_max) and prices them under the stochastic, expected-value, and
/// perfect-information models.
std::vector<CompareRow> run_compare_models(const NetworkInstance& network,
                                           const CompareParams& params,
                                           const SolverOptions& options);

struct OracleCheck {
    bool match = false;
    std::string solver_status;
    std::string oracle_status;
    double solver_cost = 0.0;
    double oracle_cost = 0.0;
};

/// Certifies the solver against the brute-force reference on one instance
/// (which must fit the oracle limits). Also re-evaluates both solutions
/// from scratch; `match` requires agreement to 1e-9 everywhere.
OracleCheck oracle_check(const NetworkInstance& instance, const SolverOptions& options);

/// CSV writers: '#'-prefixed config echo, fixed six-decimal reals, no
/// wall-clock data — identical inputs give identical bytes.
void write_fidelity_csv(std::ostream& out, const std::vector<FidelityRow>& rows,
                        const std::vector<std::string>& config_echo);
void write_reservation_csv(std::ostream& out, const std::vector<ReservationRow>& rows,
                           const std::vector<std::string>& config_echo);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows,
                       const std::vector<std::string>& config_echo);

} // namespace qnet
