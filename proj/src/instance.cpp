#include "qnet/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qnet {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

std::string node_name(NodeId n) { return std::to_string(n); }

} // namespace

double Request::expected_requirement() const {
    double mean = 0.0;
    for (const Scenario& s : scenarios) mean += s.requirement * s.probability;
    return mean;
}

NetworkInstance::NetworkInstance(int node_count, std::vector<Edge> edges,
                                 std::vector<Request> requests, CostParams costs)
    : node_count_(node_count),
      edges_(std::move(edges)),
      requests_(std::move(requests)),
      costs_(std::move(costs)) {
    // Canonical order: endpoints with u < v, edges sorted by (u, v),
    // requests by id, scenarios ascending by requirement.
    for (Edge& e : edges_) {
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    std::sort(requests_.begin(), requests_.end(),
              [](const Request& a, const Request& b) { return a.id < b.id; });
    for (Request& r : requests_) {
        std::sort(r.scenarios.begin(), r.scenarios.end(),
                  [](const Scenario& a, const Scenario& b) { return a.requirement < b.requirement; });
    }
    build_adjacency();
    validate();
}

void NetworkInstance::build_adjacency() {
    adjacency_.assign(static_cast<size_t>(std::max(node_count_, 0)), {});
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.u < 0 || e.u >= node_count_ || e.v < 0 || e.v >= node_count_) continue; // validate() reports it
        adjacency_[static_cast<size_t>(e.u)].emplace_back(e.v, static_cast<int>(i));
        adjacency_[static_cast<size_t>(e.v)].emplace_back(e.u, static_cast<int>(i));
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

int NetworkInstance::edge_index(NodeId u, NodeId v) const {
    if (u < 0 || u >= node_count_) return -1;
    for (const auto& [to, idx] : adjacency_[static_cast<size_t>(u)]) {
        if (to == v) return idx;
    }
    return -1;
}

void NetworkInstance::validate() const {
    if (node_count_ < 0) fail("nodes: negative node count");
    std::map<std::pair<NodeId, NodeId>, int> seen;
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (e.u < 0 || e.u >= node_count_) fail(where + ".u: unknown node " + node_name(e.u));
        if (e.v < 0 || e.v >= node_count_) fail(where + ".v: unknown node " + node_name(e.v));
        if (e.u == e.v) fail(where + ": self loop at node " + node_name(e.u));
        if (!seen.emplace(std::make_pair(e.u, e.v), 1).second) {
            fail(where + ": duplicate edge " + node_name(e.u) + "-" + node_name(e.v));
        }
        if (!(e.base_fidelity > 0.0) || e.base_fidelity > 1.0) {
            fail(where + ".fidelity: must lie in (0,1]");
        }
        if (e.cap_reserved < 0) fail(where + ".cap_reserved: negative");
        if (e.cap_ondemand < 0) fail(where + ".cap_ondemand: negative");
        if (e.fidelity_threshold < 0.0 || e.fidelity_threshold > 1.0) {
            fail(where + ".threshold: must lie in [0,1]");
        }
    }
    const CostParams& c = costs_;
    if (c.energy_per_node < 0 || c.repeater_setup < 0 || c.reserve_per_pair < 0 ||
        c.utilize_per_pair < 0 || c.ondemand_per_pair < 0) {
        fail("costs: all prices must be nonnegative");
    }
    if (!c.energy_override.empty() && c.energy_override.size() != static_cast<size_t>(node_count_)) {
        fail("costs.energy_override: wrong length");
    }
    if (!c.setup_override.empty() && c.setup_override.size() != static_cast<size_t>(node_count_)) {
        fail("costs.setup_override: wrong length");
    }

    std::vector<int> component(static_cast<size_t>(node_count_), -1);
    int next_component = 0;
    for (NodeId start = 0; start < node_count_; ++start) {
        if (component[static_cast<size_t>(start)] != -1) continue;
        std::queue<NodeId> frontier;
        frontier.push(start);
        component[static_cast<size_t>(start)] = next_component;
        while (!frontier.empty()) {
            NodeId n = frontier.front();
            frontier.pop();
            for (const auto& [to, idx] : adjacency_[static_cast<size_t>(n)]) {
                (void)idx;
                if (component[static_cast<size_t>(to)] == -1) {
                    component[static_cast<size_t>(to)] = next_component;
                    frontier.push(to);
                }
            }
        }
        ++next_component;
    }

    std::map<int, int> ids;
    for (size_t i = 0; i < requests_.size(); ++i) {
        const Request& r = requests_[i];
        const std::string where = "requests[" + std::to_string(i) + "]";
        if (!ids.emplace(r.id, 1).second) fail(where + ".id: duplicate id " + std::to_string(r.id));
        if (r.source < 0 || r.source >= node_count_) fail(where + ".src: unknown node");
        if (r.destination < 0 || r.destination >= node_count_) fail(where + ".dst: unknown node");
        if (r.source == r.destination) fail(where + ": src equals dst");
        if (component[static_cast<size_t>(r.source)] != component[static_cast<size_t>(r.destination)]) {
            fail(where + ": no path between " + node_name(r.source) + " and " +
                 node_name(r.destination));
        }
        if (r.scenarios.empty()) fail(where + ".scenarios: empty");
        double sum = 0.0;
        for (size_t k = 0; k < r.scenarios.size(); ++k) {
            const Scenario& s = r.scenarios[k];
            const std::string sw = where + ".scenarios[" + std::to_string(k) + "]";
            if (s.requirement < 0.0 || s.requirement > 1.0) fail(sw + ".req: outside [0,1]");
            if (s.probability < 0.0 || s.probability > 1.0) fail(sw + ".prob: outside [0,1]");
            if (k > 0 && !(r.scenarios[k - 1].requirement < s.requirement)) {
                fail(sw + ".req: duplicate requirement value");
            }
            sum += s.probability;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            fail(where + ".scenarios: probabilities sum to " + std::to_string(sum) + ", not 1");
        }
    }
}

namespace {

double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        fail(where + "." + key + ": missing or not a number");
    }
    return obj[key].get<double>();
}

int require_int(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number_integer()) {
        fail(where + "." + key + ": missing or not an integer");
    }
    return obj[key].get<int>();
}

} // namespace

NetworkInstance parse_instance(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(std::string("instance parse error: ") + e.what());
    }
    if (!doc.is_object()) fail("instance: top level must be an object");
    for (const char* key : {"nodes", "edges", "requests", "costs"}) {
        if (!doc.contains(key)) fail(std::string("instance: missing field '") + key + "'");
    }
    if (!doc["nodes"].is_array()) fail("nodes: must be an array");

    std::vector<NodeId> node_ids;
    for (size_t i = 0; i < doc["nodes"].size(); ++i) {
        node_ids.push_back(require_int(doc["nodes"][i], "id", "nodes[" + std::to_string(i) + "]"));
    }
    std::sort(node_ids.begin(), node_ids.end());
    for (size_t i = 0; i < node_ids.size(); ++i) {
        if (node_ids[i] != static_cast<NodeId>(i)) {
            fail("nodes: ids must be the dense range 0..n-1");
        }
    }

    std::vector<Edge> edges;
    for (size_t i = 0; i < doc["edges"].size(); ++i) {
        const auto& je = doc["edges"][i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        Edge e;
        e.u = require_int(je, "u", where);
        e.v = require_int(je, "v", where);
        e.base_fidelity = require_number(je, "fidelity", where);
        e.cap_reserved = require_int(je, "cap_reserved", where);
        e.cap_ondemand = require_int(je, "cap_ondemand", where);
        e.fidelity_threshold = require_number(je, "threshold", where);
        edges.push_back(e);
    }

    std::vector<Request> requests;
    for (size_t i = 0; i < doc["requests"].size(); ++i) {
        const auto& jr = doc["requests"][i];
        const std::string where = "requests[" + std::to_string(i) + "]";
        Request r;
        r.id = require_int(jr, "id", where);
        r.source = require_int(jr, "src", where);
        r.destination = require_int(jr, "dst", where);
        if (!jr.contains("scenarios") || !jr["scenarios"].is_array()) {
            fail(where + ".scenarios: missing or not an array");
        }
        for (size_t k = 0; k < jr["scenarios"].size(); ++k) {
            const std::string sw = where + ".scenarios[" + std::to_string(k) + "]";
            Scenario s;
            s.requirement = require_number(jr["scenarios"][k], "req", sw);
            s.probability = require_number(jr["scenarios"][k], "prob", sw);
            r.scenarios.push_back(s);
        }
        requests.push_back(std::move(r));
    }

    const auto& jc = doc["costs"];
    CostParams costs;
    costs.energy_per_node = require_number(jc, "energy", "costs");
    costs.repeater_setup = require_number(jc, "setup", "costs");
    costs.reserve_per_pair = require_number(jc, "reserve", "costs");
    costs.utilize_per_pair = require_number(jc, "utilize", "costs");
    costs.ondemand_per_pair = require_number(jc, "ondemand", "costs");

    NetworkInstance instance(static_cast<int>(node_ids.size()), std::move(edges),
                             std::move(requests), std::move(costs));
    instance.validate();
    return instance;
}

NetworkInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string save_instance(const NetworkInstance& instance) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (NodeId n = 0; n < instance.node_count(); ++n) {
        doc["nodes"].push_back({{"id", n}});
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : instance.edges()) {
        doc["edges"].push_back({{"u", e.u},
                                {"v", e.v},
                                {"fidelity", e.base_fidelity},
                                {"cap_reserved", e.cap_reserved},
                                {"cap_ondemand", e.cap_ondemand},
                                {"threshold", e.fidelity_threshold}});
    }
    doc["requests"] = nlohmann::ordered_json::array();
    for (const Request& r : instance.requests()) {
        nlohmann::ordered_json jr{{"id", r.id}, {"src", r.source}, {"dst", r.destination}};
        jr["scenarios"] = nlohmann::ordered_json::array();
        for (const Scenario& s : r.scenarios) {
            jr["scenarios"].push_back({{"req", s.requirement}, {"prob", s.probability}});
        }
        doc["requests"].push_back(std::move(jr));
    }
    doc["costs"] = {{"energy", instance.costs().energy_per_node},
                    {"setup", instance.costs().repeater_setup},
                    {"reserve", instance.costs().reserve_per_pair},
                    {"utilize", instance.costs().utilize_per_pair},
                    {"ondemand", instance.costs().ondemand_per_pair}};
    return doc.dump(2) + "\n";
}

void save_instance(const NetworkInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write instance file: " + path);
    out << save_instance(instance);
}

namespace {

// Standard 14-node / 21-link NSFNET, zero-indexed.
const std::vector<std::pair<int, int>> kNsfnetLinks = {
    {0, 1}, {0, 2}, {0, 7},  {1, 2},  {1, 3},   {2, 5},   {3, 4},
    {3, 10}, {4, 5}, {4, 6}, {5, 9},  {5, 12},  {6, 7},   {7, 8},
    {8, 9}, {8, 11}, {8, 13}, {10, 11}, {10, 12}, {11, 13}, {12, 13}};

NetworkInstance assemble(int nodes, const std::vector<std::pair<int, int>>& links,
                         const TopologyDefaults& d) {
    std::vector<Edge> edges;
    edges.reserve(links.size());
    for (const auto& [u, v] : links) {
        edges.push_back(Edge{static_cast<NodeId>(u), static_cast<NodeId>(v), d.base_fidelity,
                             d.cap_reserved, d.cap_ondemand, d.fidelity_threshold});
    }
    return NetworkInstance(nodes, std::move(edges), {}, CostParams{});
}

} // namespace

NetworkInstance builtin_topology(const std::string& name, const TopologyDefaults& defaults) {
    if (name == "nsfnet") {
        return assemble(14, kNsfnetLinks, defaults);
    }
    int a = 0, b = 0;
    if (std::sscanf(name.c_str(), "line(%d)", &a) == 1 && name.back() == ')') {
        if (a < 2) fail("builtin_topology: line(k) needs k >= 2");
        std::vector<std::pair<int, int>> links;
        for (int i = 0; i + 1 < a; ++i) links.emplace_back(i, i + 1);
        return assemble(a, links, defaults);
    }
    if (std::sscanf(name.c_str(), "grid(%d,%d)", &a, &b) == 2 && name.back() == ')') {
        if (a < 1 || b < 1 || a * b < 2) fail("builtin_topology: grid(a,b) needs at least 2 nodes");
        std::vector<std::pair<int, int>> links;
        auto at = [b](int row, int col) { return row * b + col; };
        for (int row = 0; row < a; ++row) {
            for (int col = 0; col < b; ++col) {
                if (col + 1 < b) links.emplace_back(at(row, col), at(row, col + 1));
                if (row + 1 < a) links.emplace_back(at(row, col), at(row + 1, col));
            }
        }
        return assemble(a * b, links, defaults);
    }
    fail("builtin_topology: unknown name '" + name + "'");
}

std::vector<double> scenario_grid(double step, double f_max) {
    if (!(step > 0.0) || step > 1.0) fail("scenario_grid: step must lie in (0,1]");
    if (f_max > 1.0) fail("scenario_grid: f_max must not exceed 1");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double value = k * step;
        if (value > f_max + 1e-12) break;
        grid.push_back(value);
    }
    return grid;
}

} // namespace qnet
