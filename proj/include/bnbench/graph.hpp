#ifndef BNBENCH_GRAPH_HPP
#define BNBENCH_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace bnbench {

using NodeId = int;

enum class Mark : std::uint8_t { None = 0, Tail, Arrow, Circle };

/// One edge with the endpoint mark at each end; `mark_a` sits at node `a`.
struct Edge {
    NodeId a = 0;
    Mark mark_a = Mark::Tail;
    NodeId b = 0;
    Mark mark_b = Mark::Tail;

    bool operator==(const Edge&) const = default;
};

struct UnshieldedTriple {
    NodeId x = 0;
    NodeId y = 0;
    NodeId z = 0;

    auto operator<=>(const UnshieldedTriple&) const = default;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mixed graph over dense node indices 0..n-1 with endpoint marks.
///
/// Covers DAGs (tail/arrow), PDAGs/CPDAGs (plus tail/tail) and PAGs (any
/// combination incl. circles). At most one edge per unordered pair, no
/// self-loops. Storage is an n x n endpoint matrix, so adjacency queries are
/// O(1) and neighbor scans O(n).
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(std::vector<std::string> names);

    static MixedGraph complete_undirected(std::vector<std::string> names);

    int num_nodes() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(NodeId v) const { return names_.at(static_cast<std::size_t>(v)); }
    /// -1 when absent.
    NodeId index_of(const std::string& name) const;

    /// Mark at `to`'s end of the edge between `from` and `to`.
    Mark endpoint(NodeId from, NodeId to) const { return marks_[slot(from, to)]; }
    void set_endpoint(NodeId from, NodeId to, Mark m);

    bool adjacent(NodeId a, NodeId b) const { return endpoint(a, b) != Mark::None; }
    bool is_directed(NodeId from, NodeId to) const {
        return endpoint(from, to) == Mark::Arrow && endpoint(to, from) == Mark::Tail;
    }
    bool is_undirected(NodeId a, NodeId b) const {
        return endpoint(a, b) == Mark::Tail && endpoint(b, a) == Mark::Tail;
    }
    bool is_bidirected(NodeId a, NodeId b) const {
        return endpoint(a, b) == Mark::Arrow && endpoint(b, a) == Mark::Arrow;
    }

    void add_edge(NodeId a, Mark mark_a, NodeId b, Mark mark_b);
    void add_directed(NodeId from, NodeId to) { add_edge(from, Mark::Tail, to, Mark::Arrow); }
    void add_undirected(NodeId a, NodeId b) { add_edge(a, Mark::Tail, b, Mark::Tail); }
    void remove_edge(NodeId a, NodeId b);
    /// Turns an existing edge into from --> to.
    void orient(NodeId from, NodeId to);

    std::vector<NodeId> adjacents(NodeId v) const;
    std::vector<NodeId> parents(NodeId v) const;
    std::vector<NodeId> children(NodeId v) const;
    /// Undirected (tail/tail) neighbors.
    std::vector<NodeId> neighbors(NodeId v) const;

    /// Edges with a < b, sorted by (a, b).
    std::vector<Edge> edges() const;
    int num_edges() const;

    bool only_directed() const;
    bool is_pdag() const;
    bool same_skeleton(const MixedGraph& other) const;

    /// Undirected copy with every edge relaxed to tail/tail.
    MixedGraph skeleton() const;
    /// Copy with the given node order; names follow the permutation.
    MixedGraph permuted(const std::vector<NodeId>& new_to_old) const;

    bool operator==(const MixedGraph& other) const = default;

private:
    std::size_t slot(NodeId from, NodeId to) const {
        return static_cast<std::size_t>(from) * names_.size() + static_cast<std::size_t>(to);
    }
    void check_node(NodeId v) const;

    std::vector<std::string> names_;
    std::vector<Mark> marks_;
};

/// Requires a graph of directed edges only; throws GraphError otherwise.
bool is_acyclic(const MixedGraph& g);

/// Topological order of a directed-only graph, lowest index first among ready
/// nodes. Throws GraphError on a directed cycle.
std::vector<NodeId> topological_order(const MixedGraph& g);

std::vector<UnshieldedTriple> unshielded_triples(const MixedGraph& g);

/// True when every pair in `nodes` is adjacent in `g`.
bool is_clique(const MixedGraph& g, const std::vector<NodeId>& nodes);

/// Colliders x -> y <- z with x, z non-adjacent, x < z.
std::vector<UnshieldedTriple> colliders(const MixedGraph& g);

}  // namespace bnbench

#endif  // BNBENCH_GRAPH_HPP
