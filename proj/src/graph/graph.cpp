#include "bnbench/graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace bnbench {

MixedGraph::MixedGraph(std::vector<std::string> names) : names_(std::move(names)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw GraphError("empty node name");
        if (!seen.insert(n).second) throw GraphError("duplicate node name: " + n);
    }
    marks_.assign(names_.size() * names_.size(), Mark::None);
}

MixedGraph MixedGraph::complete_undirected(std::vector<std::string> names) {
    MixedGraph g(std::move(names));
    for (NodeId a = 0; a < g.num_nodes(); ++a)
        for (NodeId b = a + 1; b < g.num_nodes(); ++b) g.add_undirected(a, b);
    return g;
}

NodeId MixedGraph::index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<NodeId>(it - names_.begin());
}

void MixedGraph::check_node(NodeId v) const {
    if (v < 0 || v >= num_nodes()) throw GraphError("node index out of range: " + std::to_string(v));
}

void MixedGraph::set_endpoint(NodeId from, NodeId to, Mark m) {
    check_node(from);
    check_node(to);
    if (!adjacent(from, to)) throw GraphError("no edge between " + name(from) + " and " + name(to));
    if (m == Mark::None) throw GraphError("use remove_edge to delete an edge");
    marks_[slot(from, to)] = m;
}

void MixedGraph::add_edge(NodeId a, Mark mark_a, NodeId b, Mark mark_b) {
    check_node(a);
    check_node(b);
    if (a == b) throw GraphError("self-loop on " + name(a));
    if (adjacent(a, b)) throw GraphError("edge already present: " + name(a) + " " + name(b));
    if (mark_a == Mark::None || mark_b == Mark::None) throw GraphError("edge marks must be set");
    marks_[slot(b, a)] = mark_a;
    marks_[slot(a, b)] = mark_b;
}

void MixedGraph::remove_edge(NodeId a, NodeId b) {
    check_node(a);
    check_node(b);
    marks_[slot(a, b)] = Mark::None;
    marks_[slot(b, a)] = Mark::None;
}

void MixedGraph::orient(NodeId from, NodeId to) {
    if (!adjacent(from, to)) throw GraphError("cannot orient missing edge " + name(from) + " -> " + name(to));
    marks_[slot(from, to)] = Mark::Arrow;
    marks_[slot(to, from)] = Mark::Tail;
}

std::vector<NodeId> MixedGraph::adjacents(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < num_nodes(); ++u)
        if (adjacent(v, u)) out.push_back(u);
    return out;
}

std::vector<NodeId> MixedGraph::parents(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < num_nodes(); ++u)
        if (is_directed(u, v)) out.push_back(u);
    return out;
}

std::vector<NodeId> MixedGraph::children(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < num_nodes(); ++u)
        if (is_directed(v, u)) out.push_back(u);
    return out;
}

std::vector<NodeId> MixedGraph::neighbors(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < num_nodes(); ++u)
        if (is_undirected(v, u)) out.push_back(u);
    return out;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    for (NodeId a = 0; a < num_nodes(); ++a)
        for (NodeId b = a + 1; b < num_nodes(); ++b)
            if (adjacent(a, b)) out.push_back({a, endpoint(b, a), b, endpoint(a, b)});
    return out;
}

int MixedGraph::num_edges() const {
    int count = 0;
    for (NodeId a = 0; a < num_nodes(); ++a)
        for (NodeId b = a + 1; b < num_nodes(); ++b)
            if (adjacent(a, b)) ++count;
    return count;
}

bool MixedGraph::only_directed() const {
    for (const auto& e : edges()) {
        bool fwd = e.mark_a == Mark::Tail && e.mark_b == Mark::Arrow;
        bool back = e.mark_a == Mark::Arrow && e.mark_b == Mark::Tail;
        if (!fwd && !back) return false;
    }
    return true;
}

bool MixedGraph::is_pdag() const {
    for (const auto& e : edges()) {
        bool directed = (e.mark_a == Mark::Tail && e.mark_b == Mark::Arrow) ||
                        (e.mark_a == Mark::Arrow && e.mark_b == Mark::Tail);
        bool undirected = e.mark_a == Mark::Tail && e.mark_b == Mark::Tail;
        if (!directed && !undirected) return false;
    }
    return true;
}

bool MixedGraph::same_skeleton(const MixedGraph& other) const {
    if (names_ != other.names_) return false;
    for (NodeId a = 0; a < num_nodes(); ++a)
        for (NodeId b = a + 1; b < num_nodes(); ++b)
            if (adjacent(a, b) != other.adjacent(a, b)) return false;
    return true;
}

MixedGraph MixedGraph::skeleton() const {
    MixedGraph out(names_);
    for (const auto& e : edges()) out.add_undirected(e.a, e.b);
    return out;
}

MixedGraph MixedGraph::permuted(const std::vector<NodeId>& new_to_old) const {
    if (static_cast<int>(new_to_old.size()) != num_nodes()) throw GraphError("permutation size mismatch");
    std::vector<std::string> names;
    names.reserve(new_to_old.size());
    for (NodeId old : new_to_old) names.push_back(name(old));
    MixedGraph out(std::move(names));
    for (NodeId a = 0; a < num_nodes(); ++a)
        for (NodeId b = 0; b < num_nodes(); ++b)
            out.marks_[out.slot(a, b)] = endpoint(new_to_old[a], new_to_old[b]);
    return out;
}

std::vector<NodeId> topological_order(const MixedGraph& g) {
    if (!g.only_directed()) throw GraphError("topological order requires a directed graph");
    const int n = g.num_nodes();
    std::vector<int> indegree(n, 0);
    for (NodeId v = 0; v < n; ++v) indegree[v] = static_cast<int>(g.parents(v).size());
    std::vector<NodeId> order;
    std::vector<bool> done(n, false);
    while (static_cast<int>(order.size()) < n) {
        NodeId next = -1;
        for (NodeId v = 0; v < n; ++v) {
            if (!done[v] && indegree[v] == 0) {
                next = v;
                break;
            }
        }
        if (next < 0) throw GraphError("graph has a directed cycle");
        done[next] = true;
        order.push_back(next);
        for (NodeId c : g.children(next)) --indegree[c];
    }
    return order;
}

bool is_acyclic(const MixedGraph& g) {
    if (!g.only_directed()) throw GraphError("is_acyclic requires directed edges only");
    try {
        topological_order(g);
    } catch (const GraphError&) {
        return false;
    }
    return true;
}

std::vector<UnshieldedTriple> unshielded_triples(const MixedGraph& g) {
    std::vector<UnshieldedTriple> out;
    for (NodeId y = 0; y < g.num_nodes(); ++y) {
        auto adj = g.adjacents(y);
        for (std::size_t i = 0; i < adj.size(); ++i)
            for (std::size_t j = i + 1; j < adj.size(); ++j)
                if (!g.adjacent(adj[i], adj[j])) out.push_back({adj[i], y, adj[j]});
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        return std::tie(l.x, l.z, l.y) < std::tie(r.x, r.z, r.y);
    });
    return out;
}

bool is_clique(const MixedGraph& g, const std::vector<NodeId>& nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (!g.adjacent(nodes[i], nodes[j])) return false;
    return true;
}

std::vector<UnshieldedTriple> colliders(const MixedGraph& g) {
    std::vector<UnshieldedTriple> out;
    for (const auto& t : unshielded_triples(g))
        if (g.is_directed(t.x, t.y) && g.is_directed(t.z, t.y)) out.push_back(t);
    return out;
}

}  // namespace bnbench
