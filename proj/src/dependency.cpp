#include "incasp/dependency.hpp"

#include "incasp/scc.hpp"

#include <algorithm>
#include <set>

namespace incasp {

std::string to_string(const PredicateKey& key) {
    return key.name + "/" + std::to_string(key.arity);
}

PredicateKey predicate_of(const Atom& atom) {
    return PredicateKey{atom.predicate, static_cast<int>(atom.arity())};
}

int PredicateGraph::index_of(const PredicateKey& key) const {
    auto it = std::lower_bound(predicates.begin(), predicates.end(), key);
    if (it == predicates.end() || *it != key) return -1;
    return static_cast<int>(it - predicates.begin());
}

bool PredicateGraph::has_edge(const PredicateKey& from, const PredicateKey& to) const {
    int f = index_of(from);
    int t = index_of(to);
    if (f < 0 || t < 0) return false;
    return std::any_of(edges.begin(), edges.end(),
                       [&](const PredicateEdge& e) { return e.from == f && e.to == t; });
}

PredicateGraph build_graph(const Program& program) {
    std::set<PredicateKey> nodes;
    for (const Rule& rule : program.rules) {
        for (const Atom& atom : rule.head) nodes.insert(predicate_of(atom));
        for (const Literal& lit : rule.body) nodes.insert(predicate_of(lit.atom));
    }

    PredicateGraph graph;
    graph.predicates.assign(nodes.begin(), nodes.end());

    std::set<std::tuple<int, int, bool>> edges;
    for (const Rule& rule : program.rules) {
        if (rule.head.empty()) continue; // constraints and weak constraints
        std::vector<int> heads;
        for (const Atom& atom : rule.head) heads.push_back(graph.index_of(predicate_of(atom)));
        for (const Literal& lit : rule.body) {
            int from = graph.index_of(predicate_of(lit.atom));
            for (int to : heads) edges.emplace(from, to, lit.negated);
        }
        for (int a : heads) {
            for (int b : heads) {
                if (a != b) edges.emplace(a, b, false);
            }
        }
    }
    for (const auto& [from, to, negative] : edges) {
        graph.edges.push_back(PredicateEdge{from, to, negative});
    }
    return graph;
}

ComponentOrder condense(const Program& program, const PredicateGraph& graph) {
    const int n = static_cast<int>(graph.predicates.size());
    std::vector<std::vector<int>> adjacency(n);
    for (const PredicateEdge& e : graph.edges) adjacency[e.from].push_back(e.to);

    SccResult scc = strongly_connected_components(adjacency);
    const int m = static_cast<int>(scc.components.size());

    // Condensation edges and in-degrees.
    std::vector<std::set<int>> successors(m);
    std::vector<int> indegree(m, 0);
    for (const PredicateEdge& e : graph.edges) {
        int from = scc.component_of[e.from];
        int to = scc.component_of[e.to];
        if (from != to && successors[from].insert(to).second) ++indegree[to];
    }

    // Smallest predicate of each component, for the deterministic tie-break.
    std::vector<const PredicateKey*> smallest(m);
    for (int c = 0; c < m; ++c) smallest[c] = &graph.predicates[scc.components[c].front()];

    std::vector<int> ready;
    for (int c = 0; c < m; ++c) {
        if (indegree[c] == 0) ready.push_back(c);
    }

    ComponentOrder order;
    std::vector<int> topo_position(m, -1);
    while (!ready.empty()) {
        auto best = std::min_element(ready.begin(), ready.end(),
                                     [&](int a, int b) { return *smallest[a] < *smallest[b]; });
        int current = *best;
        ready.erase(best);
        topo_position[current] = static_cast<int>(order.components.size());

        std::vector<PredicateKey> members;
        for (int node : scc.components[current]) members.push_back(graph.predicates[node]);
        order.components.push_back(std::move(members));

        for (int next : successors[current]) {
            if (--indegree[next] == 0) ready.push_back(next);
        }
    }

    order.component_rules.resize(order.components.size());
    for (const Rule& rule : program.rules) {
        if (rule.head.empty()) {
            order.trailing_rules.push_back(rule.id);
            continue;
        }
        int earliest = -1;
        for (const Atom& atom : rule.head) {
            int node = graph.index_of(predicate_of(atom));
            int position = topo_position[scc.component_of[node]];
            if (earliest < 0 || position < earliest) earliest = position;
        }
        order.component_rules[earliest].push_back(rule.id);
    }
    return order;
}

std::string dump(const PredicateGraph& graph) {
    std::string out = "nodes:";
    for (std::size_t i = 0; i < graph.predicates.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += to_string(graph.predicates[i]);
    }
    out += "\n";
    for (const PredicateEdge& e : graph.edges) {
        out += to_string(graph.predicates[e.from]) + " -> " + to_string(graph.predicates[e.to]);
        if (e.negative) out += " (neg)";
        out += "\n";
    }
    return out;
}

std::string dump(const ComponentOrder& order) {
    std::string out;
    for (const std::vector<PredicateKey>& component : order.components) {
        out += "{";
        for (std::size_t i = 0; i < component.size(); ++i) {
            if (i > 0) out += ", ";
            out += to_string(component[i]);
        }
        out += "}\n";
    }
    if (!order.trailing_rules.empty()) {
        out += "trailing:";
        for (std::size_t i = 0; i < order.trailing_rules.size(); ++i) {
            out += i == 0 ? " " : ", ";
            out += std::to_string(order.trailing_rules[i]);
        }
        out += "\n";
    }
    return out;
}

} // namespace incasp
