#ifndef BNBENCH_ORIENTATION_HPP
#define BNBENCH_ORIENTATION_HPP

#include <cstdint>
#include <set>

#include "bnbench/graph.hpp"

namespace bnbench {

class OrientationConflict : public GraphError {
public:
    using GraphError::GraphError;
};

class NoExtension : public GraphError {
public:
    using GraphError::GraphError;
};

/// Applies Meek rules R1-R4 to a fixpoint. Rules fire only on undirected
/// edges. `blocked` lists unshielded triples (x, y, z) whose middle node must
/// not propagate orientation (ambiguous triples from conservative collider
/// detection); R1 and R3 skip them.
///
/// Throws OrientationConflict when one pass forces both directions of an
/// edge or an orientation would close a directed cycle. With `conflicts` set,
/// such edges are left unoriented and counted instead.
MixedGraph meek_closure(const MixedGraph& g, const std::set<UnshieldedTriple>& blocked = {},
                        int* conflicts = nullptr);

/// Dor-Tarsi extension of a PDAG to a DAG with the same skeleton, the same
/// directed edges and no new colliders. Sinks are removed lowest index first.
MixedGraph consistent_extension(const MixedGraph& pdag);

/// CPDAG of a DAG: skeleton plus colliders, closed under Meek rules.
MixedGraph cpdag_of(const MixedGraph& dag);

struct RandomOrientation {
    MixedGraph dag;
    int dropped_bidirected = 0;
    /// False when no collider-preserving extension existed and the remaining
    /// undirected edges were oriented along a random topological order.
    bool collider_preserving = true;
};

/// Turns a PDAG or PAG into a DAG, seeded.
///
/// Circle marks relax to tails, so `o->` becomes `-->` and `o-o` becomes
/// `---`. Bidirected edges are treated as undirected. A random
/// collider-preserving extension is tried first (Dor-Tarsi with the sink
/// picked uniformly among eligible nodes); if none exists the bidirected edges
/// are dropped and counted, then retried; if that also fails the undirected
/// edges follow a random topological order of the directed part.
///
/// Throws NoExtension when the directed part already has a cycle.
RandomOrientation randomize_orientation(const MixedGraph& g, std::uint64_t seed);

}  // namespace bnbench

#endif  // BNBENCH_ORIENTATION_HPP
