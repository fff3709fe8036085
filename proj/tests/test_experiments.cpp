#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/experiments.hpp"
#include "qnet/instance.hpp"
#include "qnet/model.hpp"
#include "test_support.hpp"

using namespace qnet;
using qtest::data_file;
using qtest::demo_costs;
using qtest::line3;
using qtest::single_edge;

TEST_CASE("the requirement sweep tracks the purification ladder") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    FidelitySweepParams params;
    params.from = 0.70;
    params.to = 0.99;
    params.step = 0.01;
    const std::vector<FidelityRow> rows = run_sweep_fidelity(demo, params, {});
    REQUIRE(rows.size() == 30);

    for (size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(rows[i].requirement);
        CHECK(rows[i].status == "optimal");
        if (i > 0) {
            CHECK(rows[i].reserved >= rows[i - 1].reserved);
            CHECK(rows[i].utilized >= rows[i - 1].utilized);
        }
        if (rows[i].requirement <= 0.80 + 1e-9) {
            // below the edge threshold every point solves the same folded target
            CHECK(rows[i].reserved == rows[0].reserved);
            CHECK(rows[i].utilized == rows[0].utilized);
            CHECK(rows[i].ondemand == rows[0].ondemand);
        }
        if (i + 1 < rows.size()) CHECK(rows[i].ondemand == 0);
    }
    // 0.99 needs 12 pairs per edge; the reserved pool holds 10, so the last
    // two pairs of each edge arrive on demand.
    CHECK(rows.back().reserved == 20);
    CHECK(rows.back().utilized == 20);
    CHECK(rows.back().ondemand == 4);
}

TEST_CASE("the requirement sweep validates its inputs") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    FidelitySweepParams params;
    params.from = 0.7;
    params.to = 0.9;
    params.step = 0.05;

    SUBCASE("no requests") {
        NetworkInstance bare(2, {{0, 1, 0.9, 8, 8, 0.0}}, {}, demo_costs());
        CHECK_THROWS_AS(run_sweep_fidelity(bare, params, {}), std::invalid_argument);
    }
    SUBCASE("bad step") {
        params.step = 0.0;
        CHECK_THROWS_AS(run_sweep_fidelity(demo, params, {}), std::invalid_argument);
    }
    SUBCASE("reversed range") {
        params.from = 0.95;
        CHECK_THROWS_AS(run_sweep_fidelity(demo, params, {}), std::invalid_argument);
    }
    SUBCASE("requirement outside (0,1)") {
        params.from = 0.0;
        CHECK_THROWS_AS(run_sweep_fidelity(demo, params, {}), std::invalid_argument);
        params.from = 0.7;
        params.to = 1.0;
        CHECK_THROWS_AS(run_sweep_fidelity(demo, params, {}), std::invalid_argument);
    }
}

TEST_CASE("the reservation sweep prices each forced total exactly") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    ReservationSweepParams params;
    params.from = 0;
    params.to = 20;
    const std::vector<ReservationRow> rows = run_sweep_reservation(demo, params, {});
    REQUIRE(rows.size() == 21);

    for (size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(i);
        CHECK(rows[i].forced == static_cast<int>(i));
        CHECK(rows[i].status == "optimal");
        // only one route exists, so stage 1 is node cost plus the forced pairs
        CHECK(rows[i].stage1 == doctest::Approx(310.0 + 10.0 * rows[i].forced).epsilon(1e-9));
        CHECK(rows[i].total == doctest::Approx(rows[i].stage1 + rows[i].stage2).epsilon(1e-9));
        if (i > 0) CHECK(rows[i].stage2 <= rows[i - 1].stage2 + 1e-9);
    }
    CHECK(rows.front().stage2 == doctest::Approx(2760.0).epsilon(1e-9));
    CHECK(rows.back().total == doctest::Approx(523.8).epsilon(1e-9));
}

TEST_CASE("the reservation sweep validates its range") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    ReservationSweepParams params;

    SUBCASE("beyond the reservable pools") {
        params.from = 0;
        params.to = 21; // the two edges reserve at most 20 pairs together
        CHECK_THROWS_AS(run_sweep_reservation(demo, params, {}), std::invalid_argument);
    }
    SUBCASE("negative start") {
        params.from = -1;
        params.to = 4;
        CHECK_THROWS_AS(run_sweep_reservation(demo, params, {}), std::invalid_argument);
    }
    SUBCASE("reversed range") {
        params.from = 5;
        params.to = 4;
        CHECK_THROWS_AS(run_sweep_reservation(demo, params, {}), std::invalid_argument);
    }
    SUBCASE("no requests") {
        NetworkInstance bare(2, {{0, 1, 0.9, 8, 8, 0.0}}, {}, demo_costs());
        params.from = 0;
        params.to = 4;
        CHECK_THROWS_AS(run_sweep_reservation(bare, params, {}), std::invalid_argument);
    }
}

TEST_CASE("model comparison degenerates to equality on a one-point grid") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    CompareParams params;
    params.request_counts = {1, 2};
    params.seed = 7;
    params.samples = 2;
    params.grid_step = 0.9; // grid {0.9}: one requirement above the 0.8 threshold
    const std::vector<CompareRow> rows = run_compare_models(demo, params, {});
    REQUIRE(rows.size() == 2);
    for (const CompareRow& row : rows) {
        // a single known requirement leaves the expected-value model nothing to miss
        CHECK(row.status == "optimal");
        CHECK(row.cost_sp == doctest::Approx(row.cost_evp).epsilon(1e-9));
        CHECK(row.gap_percent == doctest::Approx(0.0).epsilon(1e-6));
    }
    CHECK(rows[0].n_requests == 1);
    // alone, the clairvoyant bound is exact; shared capacity keeps it a bound
    CHECK(rows[0].cost_ws == doctest::Approx(rows[0].cost_sp).epsilon(1e-9));
    CHECK(rows[1].n_requests == 2);
    CHECK(rows[1].cost_ws <= rows[1].cost_sp + 1e-9);
}

TEST_CASE("model comparison is deterministic and ordered") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    CompareParams params;
    params.request_counts = {1, 2};
    params.seed = 3;
    params.samples = 2;
    params.grid_step = 0.05; // grid {0.80, 0.85, 0.90, 0.95}
    const std::vector<CompareRow> first = run_compare_models(demo, params, {});
    const std::vector<CompareRow> second = run_compare_models(demo, params, {});
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].status == second[i].status);
        CHECK(first[i].cost_sp == second[i].cost_sp);
        CHECK(first[i].cost_evp == second[i].cost_evp);
        CHECK(first[i].cost_ws == second[i].cost_ws);
        CHECK(first[i].gap_percent == second[i].gap_percent);
        if (first[i].status == "optimal") {
            CHECK(first[i].cost_ws <= first[i].cost_sp + 1e-9);
            CHECK(first[i].cost_sp <= first[i].cost_evp + 1e-9);
        }
    }
}

TEST_CASE("model comparison rejects a grid below every threshold") {
    const NetworkInstance demo = load_instance(data_file("demo.json"));
    CompareParams params;
    params.request_counts = {1};
    params.grid_step = 0.5; // {0.5} sits under the 0.8 edge threshold
    CHECK_THROWS_AS(run_compare_models(demo, params, {}), std::invalid_argument);
    params.grid_step = 0.01;
    params.request_counts = {};
    CHECK_THROWS_AS(run_compare_models(demo, params, {}), std::invalid_argument);
    params.request_counts = {0};
    CHECK_THROWS_AS(run_compare_models(demo, params, {}), std::invalid_argument);
}

TEST_CASE("oracle_check certifies matches and infeasibility agreement") {
    SUBCASE("matching optimum") {
        const OracleCheck check = oracle_check(line3(0.75, {{0.9, 1.0}}), {});
        CHECK(check.match);
        CHECK(check.solver_status == "optimal");
        CHECK(check.oracle_status == "optimal");
        CHECK(check.solver_cost == doctest::Approx(354.0).epsilon(1e-9));
        CHECK(check.oracle_cost == doctest::Approx(354.0).epsilon(1e-9));
    }
    SUBCASE("agreeing infeasibility") {
        const OracleCheck check =
            oracle_check(single_edge(0.55, {{0, 0, 1, {{0.99, 1.0}}}}), {});
        CHECK(check.match);
        CHECK(check.solver_status == "infeasible");
        CHECK(check.oracle_status == "infeasible");
    }
}

TEST_CASE("CSV writers emit stable bytes with fixed headers") {
    const std::vector<std::string> echo{"instance=demo.json", "step=0.01"};

    FidelityRow f;
    f.requirement = 0.85;
    f.status = "optimal";
    f.reserved = 10;
    f.utilized = 10;
    f.ondemand = 0;
    std::ostringstream f1, f2;
    write_fidelity_csv(f1, {f}, echo);
    write_fidelity_csv(f2, {f}, echo);
    CHECK(f1.str() == f2.str());
    CHECK(f1.str() == "# instance=demo.json\n# step=0.01\n"
                      "requirement,status,reserved,utilized,ondemand\n"
                      "0.850000,optimal,10,10,0\n");

    ReservationRow r;
    r.forced = 4;
    r.status = "optimal";
    r.stage1 = 350.0;
    r.stage2 = 4.0;
    r.total = 354.0;
    std::ostringstream r1;
    write_reservation_csv(r1, {r}, {});
    CHECK(r1.str() == "forced_reservation,status,stage1,stage2,total\n"
                      "4,optimal,350.000000,4.000000,354.000000\n");

    CompareRow c;
    c.n_requests = 2;
    c.status = "optimal";
    c.cost_sp = 100.0;
    c.cost_evp = 125.0;
    c.cost_ws = 90.0;
    c.gap_percent = 20.0;
    std::ostringstream c1;
    write_compare_csv(c1, {c}, {"seed=1"});
    CHECK(c1.str() == "# seed=1\n"
                      "n_requests,status,cost_sp,cost_evp,cost_ws,gap_percent\n"
                      "2,optimal,100.000000,125.000000,90.000000,20.000000\n");
}
