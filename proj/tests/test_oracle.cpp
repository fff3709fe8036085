#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "qnet/instance.hpp"
#include "qnet/model.hpp"
#include "qnet/oracle.hpp"
#include "qnet/rng.hpp"
#include "qnet/solver.hpp"
#include "test_support.hpp"

using namespace qnet;
using qtest::demo_costs;
using qtest::line3;
using qtest::random_oracle_instance;
using qtest::single_edge;

TEST_CASE("brute_force refuses instances beyond its limits") {
    SUBCASE("too many nodes") {
        std::vector<Edge> edges;
        for (NodeId v = 0; v + 1 < 7; ++v) edges.push_back({v, v + 1, 0.9, 8, 8, 0.0});
        NetworkInstance inst(7, edges, {{0, 0, 6, {{0.85, 1.0}}}}, demo_costs());
        inst.validate();
        CHECK_THROWS_AS(brute_force(inst), std::invalid_argument);
    }
    SUBCASE("too many requests") {
        const NetworkInstance inst = single_edge(
            0.9, {{0, 0, 1, {{0.8, 1.0}}}, {1, 0, 1, {{0.8, 1.0}}}, {2, 0, 1, {{0.8, 1.0}}}});
        CHECK_THROWS_AS(brute_force(inst), std::invalid_argument);
    }
    SUBCASE("too many scenarios") {
        const NetworkInstance inst = single_edge(
            0.9, {{0, 0, 1, {{0.7, 0.25}, {0.75, 0.25}, {0.8, 0.25}, {0.85, 0.25}}}});
        CHECK_THROWS_AS(brute_force(inst), std::invalid_argument);
    }
    SUBCASE("pools too deep") {
        const NetworkInstance inst = single_edge(0.9, {{0, 0, 1, {{0.8, 1.0}}}}, 9, 8);
        CHECK_THROWS_AS(brute_force(inst), std::invalid_argument);
    }
    SUBCASE("a relaxed limit set admits the same instance") {
        const NetworkInstance inst = single_edge(0.9, {{0, 0, 1, {{0.8, 1.0}}}}, 9, 8);
        OracleLimits wide;
        wide.max_capacity = 9;
        CHECK(brute_force(inst, wide).feasible);
    }
}

TEST_CASE("the exhaustive reference reproduces the line optimum") {
    const NetworkInstance inst = line3(0.75, {{0.9, 1.0}});
    const OracleResult oracle = brute_force(inst);
    REQUIRE(oracle.feasible);
    CHECK(oracle.cost == doctest::Approx(354.0).epsilon(1e-12));
    CHECK(oracle.solution.method == "oracle");
    CHECK(oracle.feasible_count > 0);

    const FeasibilityReport report = evaluate(oracle.solution, inst);
    REQUIRE(report.feasible);
    CHECK(report.objective.total == doctest::Approx(oracle.cost).epsilon(1e-12));

    const Solution sp = solve_sp(inst);
    REQUIRE(sp.feasible());
    CHECK(sp.objective.total == doctest::Approx(oracle.cost).epsilon(1e-9));
}

TEST_CASE("a single edge prices like the isolated reservation scan") {
    const NetworkInstance inst =
        single_edge(0.75, {{0, 0, 1, {{0.9, 0.5}, {0.985, 0.5}}}});
    const OracleResult oracle = brute_force(inst);
    REQUIRE(oracle.feasible);

    NewsvendorProfile profile;
    profile.demands = {2, 4}; // purification ladder of 0.75 crosses 0.9 and 0.985 there
    profile.probabilities = {0.5, 0.5};
    profile.reserve_price = 10.0;
    profile.utilize_price = 1.0;
    profile.ondemand_price = 200.0;
    profile.cap_reserved = 8;
    profile.cap_ondemand = 8;
    const NewsvendorResult isolated = newsvendor_reserve(profile);
    REQUIRE(isolated.feasible);

    const double node_cost = inst.costs().node_cost(1); // destination is the only hop head
    CHECK(oracle.cost ==
          doctest::Approx(node_cost + isolated.expected_cost).epsilon(1e-12));
    CHECK(oracle.solution.plans[0].edges[0].reserved == isolated.reserved);
}

TEST_CASE("infeasible instances are rejected by oracle and solver alike") {
    const NetworkInstance inst = single_edge(0.55, {{0, 0, 1, {{0.99, 1.0}}}});
    const OracleResult oracle = brute_force(inst);
    CHECK(!oracle.feasible);
    CHECK(oracle.solution.status == SolveStatus::infeasible);
    CHECK(!oracle.solution.diagnostic.empty());
    CHECK(!solve_sp(inst).feasible());
}

TEST_CASE("no hand-built plan undercuts the exhaustive optimum") {
    const NetworkInstance inst = line3(0.75, {{0.9, 1.0}});
    const OracleResult oracle = brute_force(inst);
    REQUIRE(oracle.feasible);

    auto handmade = [](int reserved, int utilized, int ondemand) {
        Solution sol;
        sol.status = SolveStatus::optimal;
        sol.method = "handmade";
        RequestPlan plan;
        plan.request = 0;
        plan.path = {0, 1, 2};
        plan.edges = {{0, reserved, {{utilized, ondemand}}},
                      {1, reserved, {{utilized, ondemand}}}};
        sol.plans.push_back(plan);
        return sol;
    };

    for (const Solution& candidate :
         {handmade(2, 2, 0), handmade(4, 2, 0), handmade(0, 0, 2), handmade(8, 2, 0)}) {
        const FeasibilityReport report = evaluate(candidate, inst);
        REQUIRE(report.feasible);
        CHECK(oracle.cost <= report.objective.total + 1e-9);
    }
}

TEST_CASE("seeded random instances keep solver and reference in lockstep") {
    int feasible_draws = 0;
    for (std::uint32_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        const NetworkInstance inst = random_oracle_instance(rng);
        CAPTURE(seed);

        const OracleResult oracle = brute_force(inst);
        const Solution sp = solve_sp(inst);
        REQUIRE(oracle.feasible == sp.feasible());
        if (!oracle.feasible) continue;
        ++feasible_draws;

        CHECK(sp.objective.total == doctest::Approx(oracle.cost).epsilon(1e-9));

        const FeasibilityReport oracle_report = evaluate(oracle.solution, inst);
        REQUIRE(oracle_report.feasible);
        CHECK(oracle_report.objective.total == doctest::Approx(oracle.cost).epsilon(1e-9));

        const FeasibilityReport sp_report = evaluate(sp, inst);
        REQUIRE(sp_report.feasible);
        CHECK(sp_report.objective.total == doctest::Approx(sp.objective.total).epsilon(1e-9));
    }
    CHECK(feasible_draws >= 5); // the generator must exercise the equality, not vacuously pass
}

TEST_CASE("an instance with no requests costs nothing") {
    NetworkInstance inst(2, {{0, 1, 0.9, 8, 8, 0.0}}, {}, demo_costs());
    const OracleResult oracle = brute_force(inst);
    REQUIRE(oracle.feasible);
    CHECK(oracle.cost == 0.0);
    CHECK(oracle.solution.feasible());
}
