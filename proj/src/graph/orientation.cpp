#include "bnbench/orientation.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <utility>

namespace bnbench {
namespace {

bool blocked_triple(const std::set<UnshieldedTriple>& blocked, NodeId x, NodeId y, NodeId z) {
    if (blocked.empty()) return false;
    if (x > z) std::swap(x, z);
    return blocked.count({x, y, z}) > 0;
}

// Whether `to` reaches `from` along directed edges, i.e. from -> to would close a cycle.
bool creates_cycle(const MixedGraph& g, NodeId from, NodeId to) {
    std::vector<bool> seen(static_cast<std::size_t>(g.num_nodes()), false);
    std::vector<NodeId> stack{to};
    seen[to] = true;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (v == from) return true;
        for (NodeId c : g.children(v)) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    return false;
}

// Whether one of R1-R4 forces x -> y for the undirected edge x - y.
bool meek_forces(const MixedGraph& g, NodeId x, NodeId y, const std::set<UnshieldedTriple>& blocked) {
    const int n = g.num_nodes();
    for (NodeId a = 0; a < n; ++a) {
        if (a == x || a == y) continue;
        // R1: a -> x - y, a !~ y
        if (g.is_directed(a, x) && !g.adjacent(a, y) && !blocked_triple(blocked, a, x, y)) return true;
        // R2: x -> a -> y
        if (g.is_directed(x, a) && g.is_directed(a, y)) return true;
    }
    // R3: x - c -> y, x - d -> y, c !~ d
    std::vector<NodeId> mids;
    for (NodeId c = 0; c < n; ++c)
        if (c != y && g.is_undirected(x, c) && g.is_directed(c, y)) mids.push_back(c);
    for (std::size_t i = 0; i < mids.size(); ++i)
        for (std::size_t j = i + 1; j < mids.size(); ++j)
            if (!g.adjacent(mids[i], mids[j]) && !blocked_triple(blocked, mids[i], x, mids[j])) return true;
    // R4: c -> d -> y, x ~ c, x ~ d, c !~ y
    for (NodeId d = 0; d < n; ++d) {
        if (d == x || d == y || !g.is_directed(d, y) || !g.adjacent(x, d)) continue;
        for (NodeId c = 0; c < n; ++c) {
            if (c == x || c == y || c == d) continue;
            if (g.is_directed(c, d) && g.adjacent(x, c) && !g.adjacent(c, y)) return true;
        }
    }
    return false;
}

std::optional<MixedGraph> dor_tarsi(const MixedGraph& pdag, std::mt19937_64* rng) {
    const int n = pdag.num_nodes();
    MixedGraph work = pdag;
    MixedGraph result = pdag;
    std::vector<bool> removed(static_cast<std::size_t>(n), false);
    for (int step = 0; step < n; ++step) {
        std::vector<NodeId> eligible;
        for (NodeId x = 0; x < n; ++x) {
            if (removed[x]) continue;
            if (!work.children(x).empty()) continue;
            auto adj = work.adjacents(x);
            bool ok = true;
            for (NodeId y : adj) {
                if (!work.is_undirected(x, y)) continue;
                for (NodeId z : adj)
                    if (z != y && !work.adjacent(y, z)) ok = false;
                if (!ok) break;
            }
            if (ok) {
                eligible.push_back(x);
                if (rng == nullptr) break;
            }
        }
        if (eligible.empty()) return std::nullopt;
        NodeId x = eligible.front();
        if (rng != nullptr) {
            std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
            x = eligible[pick(*rng)];
        }
        for (NodeId y : work.adjacents(x)) {
            if (work.is_undirected(x, y)) result.orient(y, x);
            work.remove_edge(x, y);
        }
        removed[x] = true;
    }
    return result;
}

MixedGraph orient_by_random_order(const MixedGraph& g, std::mt19937_64& rng) {
    const int n = g.num_nodes();
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (NodeId v = 0; v < n; ++v) indegree[v] = static_cast<int>(g.parents(v).size());
    std::vector<int> position(static_cast<std::size_t>(n), -1);
    for (int placed = 0; placed < n; ++placed) {
        std::vector<NodeId> ready;
        for (NodeId v = 0; v < n; ++v)
            if (position[v] < 0 && indegree[v] == 0) ready.push_back(v);
        if (ready.empty()) throw NoExtension("directed part of the graph has a cycle");
        std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
        NodeId v = ready[pick(rng)];
        position[v] = placed;
        for (NodeId c : g.children(v)) --indegree[c];
    }
    MixedGraph out = g;
    for (const auto& e : g.edges())
        if (g.is_undirected(e.a, e.b)) {
            if (position[e.a] < position[e.b])
                out.orient(e.a, e.b);
            else
                out.orient(e.b, e.a);
        }
    return out;
}

}  // namespace

MixedGraph meek_closure(const MixedGraph& g, const std::set<UnshieldedTriple>& blocked, int* conflicts) {
    if (!g.is_pdag()) throw GraphError("meek_closure requires a PDAG");
    MixedGraph cur = g;
    for (;;) {
        std::vector<std::pair<NodeId, NodeId>> proposals;
        for (const auto& e : cur.edges()) {
            if (!cur.is_undirected(e.a, e.b)) continue;
            bool forward = meek_forces(cur, e.a, e.b, blocked);
            bool backward = meek_forces(cur, e.b, e.a, blocked);
            if (forward && backward) {
                if (conflicts == nullptr)
                    throw OrientationConflict("Meek rules force both orientations of " + cur.name(e.a) + " - " +
                                              cur.name(e.b));
                ++*conflicts;
                continue;
            }
            if (forward) proposals.emplace_back(e.a, e.b);
            if (backward) proposals.emplace_back(e.b, e.a);
        }
        if (proposals.empty()) return cur;
        bool changed = false;
        for (auto [from, to] : proposals) {
            if (creates_cycle(cur, from, to)) {
                if (conflicts == nullptr)
                    throw OrientationConflict("orienting " + cur.name(from) + " -> " + cur.name(to) +
                                              " closes a directed cycle");
                ++*conflicts;
                continue;
            }
            cur.orient(from, to);
            changed = true;
        }
        if (!changed) return cur;
    }
}

MixedGraph consistent_extension(const MixedGraph& pdag) {
    if (!pdag.is_pdag()) throw GraphError("consistent_extension requires a PDAG");
    auto dag = dor_tarsi(pdag, nullptr);
    if (!dag) throw NoExtension("PDAG admits no consistent DAG extension");
    return *dag;
}

MixedGraph cpdag_of(const MixedGraph& dag) {
    if (!is_acyclic(dag)) throw GraphError("cpdag_of requires a DAG");
    MixedGraph pattern = dag.skeleton();
    for (const auto& t : colliders(dag)) {
        pattern.orient(t.x, t.y);
        pattern.orient(t.z, t.y);
    }
    return meek_closure(pattern);
}

RandomOrientation randomize_orientation(const MixedGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MixedGraph relaxed(g.names());
    std::vector<std::pair<NodeId, NodeId>> bidirected;
    for (const auto& e : g.edges()) {
        Mark ma = e.mark_a == Mark::Circle ? Mark::Tail : e.mark_a;
        Mark mb = e.mark_b == Mark::Circle ? Mark::Tail : e.mark_b;
        if (ma == Mark::Arrow && mb == Mark::Arrow) {
            bidirected.emplace_back(e.a, e.b);
            ma = mb = Mark::Tail;
        }
        relaxed.add_edge(e.a, ma, e.b, mb);
    }

    MixedGraph directed_part(g.names());
    for (const auto& e : relaxed.edges())
        if (!relaxed.is_undirected(e.a, e.b)) directed_part.add_edge(e.a, e.mark_a, e.b, e.mark_b);
    if (!is_acyclic(directed_part)) throw NoExtension("directed part of the graph has a cycle");

    RandomOrientation out;
    if (auto dag = dor_tarsi(relaxed, &rng)) {
        out.dag = std::move(*dag);
        return out;
    }
    if (!bidirected.empty()) {
        for (auto [a, b] : bidirected) relaxed.remove_edge(a, b);
        out.dropped_bidirected = static_cast<int>(bidirected.size());
        if (auto dag = dor_tarsi(relaxed, &rng)) {
            out.dag = std::move(*dag);
            return out;
        }
    }
    out.collider_preserving = false;
    out.dag = orient_by_random_order(relaxed, rng);
    return out;
}

}  // namespace bnbench
