#include "qnet/solution.hpp"

#include <json.hpp>

namespace qnet {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json split_json(const RecourseSplit& s) {
    return ordered_json{{"utilized", s.utilized}, {"ondemand", s.ondemand}};
}

} // namespace

std::string solution_to_json(const Solution& solution, const NetworkInstance& instance) {
    ordered_json j;
    j["status"] = solution.status == SolveStatus::optimal ? "optimal" : "infeasible";
    j["method"] = solution.method;
    if (!solution.diagnostic.empty()) j["diagnostic"] = solution.diagnostic;
    j["objective"] = ordered_json{{"stage1", solution.objective.stage1},
                                  {"stage2", solution.objective.stage2},
                                  {"total", solution.objective.total}};
    ordered_json plans = ordered_json::array();
    for (const RequestPlan& plan : solution.plans) {
        ordered_json p;
        p["request"] = plan.request;
        if (plan.request >= 0 &&
            plan.request < static_cast<int>(instance.requests().size())) {
            p["request_id"] = instance.requests()[static_cast<size_t>(plan.request)].id;
        }
        p["path"] = plan.path;
        ordered_json edges = ordered_json::array();
        for (const EdgeAllocation& alloc : plan.edges) {
            const Edge& e = instance.edges()[static_cast<size_t>(alloc.edge)];
            ordered_json a;
            a["edge"] = ordered_json{{"u", e.u}, {"v", e.v}};
            a["reserved"] = alloc.reserved;
            ordered_json splits = ordered_json::array();
            for (const RecourseSplit& s : alloc.splits) splits.push_back(split_json(s));
            a["splits"] = splits;
            edges.push_back(std::move(a));
        }
        p["edges"] = edges;
        plans.push_back(std::move(p));
    }
    j["plans"] = plans;
    if (!solution.joint_recourse.empty()) {
        ordered_json joint = ordered_json::array();
        for (const JointEdgeRecourse& jr : solution.joint_recourse) {
            const Edge& e = instance.edges()[static_cast<size_t>(jr.edge)];
            ordered_json entry;
            entry["edge"] = ordered_json{{"u", e.u}, {"v", e.v}};
            entry["requests"] = jr.requests;
            ordered_json combos = ordered_json::array();
            for (const auto& row : jr.by_combo) {
                ordered_json splits = ordered_json::array();
                for (const RecourseSplit& s : row) splits.push_back(split_json(s));
                combos.push_back(std::move(splits));
            }
            entry["by_combo"] = combos;
            joint.push_back(std::move(entry));
        }
        j["joint_recourse"] = joint;
    }
    j["stats"] = ordered_json{{"nodes_explored", solution.stats.nodes_explored},
                              {"leaves_evaluated", solution.stats.leaves_evaluated},
                              {"truncated", solution.stats.truncated},
                              {"time_limit_hit", solution.stats.time_limit_hit}};
    return j.dump(2) + "\n";
}

} // namespace qnet
