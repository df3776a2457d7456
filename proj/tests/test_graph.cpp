#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "bnbench/graph.hpp"
#include "bnbench/graph_io.hpp"
#include "bnbench/orientation.hpp"
#include "support/oracles.hpp"

using namespace bnbench;

namespace {

MixedGraph abc() { return MixedGraph({"A", "B", "C"}); }

bool contains_matrix(const std::vector<oracle::Matrix>& set, const oracle::Matrix& m) {
    for (const auto& s : set)
        if (s == m) return true;
    return false;
}

}  // namespace

TEST(Graph, RejectsSelfLoopsAndDuplicatePairs) {
    MixedGraph g = abc();
    EXPECT_THROW(g.add_directed(0, 0), GraphError);
    g.add_directed(0, 1);
    EXPECT_THROW(g.add_directed(1, 0), GraphError);
    EXPECT_THROW(MixedGraph({"A", "A"}), GraphError);
}

TEST(Graph, EndpointMarksFollowEdgeKind) {
    MixedGraph g(std::vector<std::string>{"A", "B", "C", "D"});
    g.add_directed(0, 1);
    g.add_undirected(1, 2);
    g.add_edge(2, Mark::Arrow, 3, Mark::Arrow);
    EXPECT_TRUE(g.is_directed(0, 1));
    EXPECT_FALSE(g.is_directed(1, 0));
    EXPECT_TRUE(g.is_undirected(2, 1));
    EXPECT_TRUE(g.is_bidirected(3, 2));
    EXPECT_EQ(g.parents(1), std::vector<NodeId>{0});
    EXPECT_EQ(g.neighbors(1), std::vector<NodeId>{2});
    EXPECT_FALSE(g.is_pdag());
}

TEST(IsAcyclic, SpecExamples) {
    EXPECT_TRUE(is_acyclic(abc()));
    MixedGraph cyc = abc();
    cyc.add_directed(0, 1);
    cyc.add_directed(1, 2);
    cyc.add_directed(2, 0);
    EXPECT_FALSE(is_acyclic(cyc));
    MixedGraph dag = abc();
    dag.add_directed(0, 1);
    dag.add_directed(0, 2);
    dag.add_directed(1, 2);
    EXPECT_TRUE(is_acyclic(dag));
}

TEST(IsAcyclic, RejectsUndirectedEdges) {
    MixedGraph g = abc();
    g.add_undirected(0, 1);
    EXPECT_THROW(is_acyclic(g), GraphError);
}

TEST(IsAcyclic, AgreesWithPathEnumeration) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 6;
        MixedGraph g(oracle::node_names(n));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                int c = coin(rng);
                if (c == 1) g.add_directed(i, j);
                if (c == 2) g.add_directed(j, i);
            }
        EXPECT_EQ(is_acyclic(g), !oracle::has_cycle(oracle::directed_matrix(g))) << graph_to_string(g);
    }
}

TEST(UnshieldedTriples, SpecExamples) {
    MixedGraph chain = abc();
    chain.add_undirected(0, 1);
    chain.add_undirected(1, 2);
    auto t = unshielded_triples(chain);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0], (UnshieldedTriple{0, 1, 2}));

    MixedGraph tri = chain;
    tri.add_undirected(0, 2);
    EXPECT_TRUE(unshielded_triples(tri).empty());

    MixedGraph star(std::vector<std::string>{"M", "A", "B", "C"});
    for (int leaf = 1; leaf < 4; ++leaf) star.add_undirected(0, leaf);
    // one triple per unordered pair of leaves
    EXPECT_EQ(unshielded_triples(star).size(), 3u);
}

TEST(MeekClosure, OrientsAwayFromCollider) {
    MixedGraph g = abc();
    g.add_directed(0, 1);
    g.add_undirected(1, 2);
    MixedGraph out = meek_closure(g);
    EXPECT_TRUE(out.is_directed(1, 2));

    // every consistent DAG extension agrees
    for (const auto& m : oracle::all_dags(3)) {
        bool skeleton = (m[0][1] || m[1][0]) && (m[1][2] || m[2][1]) && !(m[0][2] || m[2][0]);
        bool keeps = m[0][1] && !(m[0][1] && m[2][1]);
        if (skeleton && keeps) {
            EXPECT_EQ(m[1][2], 1);
        }
    }
}

TEST(MeekClosure, AcyclicityRule) {
    MixedGraph g = abc();
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    g.add_undirected(0, 2);
    EXPECT_TRUE(meek_closure(g).is_directed(0, 2));
}

TEST(MeekClosure, UndirectedChainUnchanged) {
    MixedGraph g = abc();
    g.add_undirected(0, 1);
    g.add_undirected(1, 2);
    EXPECT_EQ(meek_closure(g), g);
}

TEST(MeekClosure, IdempotentOnRandomPdags) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        MixedGraph dag = oracle::random_dag(6, 0.4, rng);
        MixedGraph pdag = cpdag_of(dag);
        // relax a random subset of compelled edges so that rules have work to do
        std::bernoulli_distribution relax(0.5);
        for (const auto& e : pdag.edges())
            if (relax(rng)) {
                pdag.remove_edge(e.a, e.b);
                pdag.add_undirected(e.a, e.b);
            }
        for (const auto& c : colliders(dag)) {
            pdag.orient(c.x, c.y);
            pdag.orient(c.z, c.y);
        }
        MixedGraph once = meek_closure(pdag);
        EXPECT_EQ(meek_closure(once), once);
    }
}

TEST(CpdagOf, MatchesExhaustiveMarkovClass) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + trial % 3;
        MixedGraph dag = oracle::random_dag(n, 0.5, rng);
        auto members = oracle::markov_class(oracle::directed_matrix(dag));
        EXPECT_EQ(cpdag_of(dag), oracle::cpdag_from_class(dag.names(), members)) << graph_to_string(dag);
    }
}

TEST(ConsistentExtension, ChainClassMember) {
    MixedGraph g = abc();
    g.add_undirected(0, 1);
    g.add_undirected(1, 2);
    MixedGraph ext = consistent_extension(g);
    ASSERT_TRUE(ext.only_directed());
    auto chain_class = oracle::markov_class([] {
        oracle::Matrix m(3, std::vector<int>(3, 0));
        m[0][1] = m[1][2] = 1;
        return m;
    }());
    EXPECT_EQ(chain_class.size(), 3u);
    EXPECT_TRUE(contains_matrix(chain_class, oracle::directed_matrix(ext)));
}

TEST(ConsistentExtension, DagIsFixedPoint) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        MixedGraph dag = oracle::random_dag(6, 0.5, rng);
        EXPECT_EQ(consistent_extension(dag), dag);
    }
}

TEST(ConsistentExtension, DirectedCycleHasNoExtension) {
    MixedGraph g = abc();
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    g.add_directed(2, 0);
    EXPECT_THROW(consistent_extension(g), NoExtension);
}

TEST(ConsistentExtension, ReducesBackToInputClass) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + trial % 3;
        MixedGraph dag = oracle::random_dag(n, 0.45, rng);
        MixedGraph cp = cpdag_of(dag);
        MixedGraph ext = consistent_extension(cp);
        ASSERT_TRUE(is_acyclic(ext));
        auto cls = oracle::markov_class(oracle::directed_matrix(dag));
        EXPECT_TRUE(contains_matrix(cls, oracle::directed_matrix(ext)));
        EXPECT_EQ(cpdag_of(ext), cp);
    }
}

TEST(RandomizeOrientation, DeterministicPerSeed) {
    MixedGraph g(std::vector<std::string>{"A", "B"});
    g.add_undirected(0, 1);
    auto first = randomize_orientation(g, 42);
    auto again = randomize_orientation(g, 42);
    EXPECT_EQ(first.dag, again.dag);
    EXPECT_EQ(first.dag.num_edges(), 1);
    EXPECT_TRUE(first.dag.only_directed());
}

TEST(RandomizeOrientation, ColliderCpdagUnchanged) {
    MixedGraph g = abc();
    g.add_directed(0, 1);
    g.add_directed(2, 1);
    EXPECT_EQ(randomize_orientation(g, 7).dag, g);
}

TEST(RandomizeOrientation, PreservesSkeletonOverSeeds) {
    std::mt19937_64 rng(99);
    MixedGraph dag = oracle::random_dag(5, 0.6, rng);
    MixedGraph cp = cpdag_of(dag);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto out = randomize_orientation(cp, seed);
        EXPECT_TRUE(out.dag.same_skeleton(cp));
        EXPECT_TRUE(is_acyclic(out.dag));
        EXPECT_EQ(colliders(out.dag), colliders(cp));
    }
}

TEST(RandomizeOrientation, RelaxesPagMarks) {
    MixedGraph g = abc();
    g.add_edge(0, Mark::Circle, 1, Mark::Arrow);
    g.add_edge(1, Mark::Arrow, 2, Mark::Circle);
    auto out = randomize_orientation(g, 1);
    EXPECT_TRUE(out.dag.is_directed(0, 1));
    EXPECT_TRUE(out.dag.is_directed(2, 1));
}

TEST(RandomizeOrientation, BidirectedEdgeKeptOrCounted) {
    MixedGraph g = abc();
    g.add_directed(0, 1);
    g.add_directed(2, 1);
    g.add_edge(0, Mark::Arrow, 2, Mark::Arrow);
    auto out = randomize_orientation(g, 3);
    EXPECT_TRUE(is_acyclic(out.dag));
    EXPECT_EQ(out.dag.num_edges() + out.dropped_bidirected, 3);
}

TEST(RandomizeOrientation, DirectedCycleThrows) {
    MixedGraph g = abc();
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    g.add_directed(2, 0);
    EXPECT_THROW(randomize_orientation(g, 0), NoExtension);
}

TEST(GraphIo, RoundTripsAllMarks) {
    MixedGraph g(std::vector<std::string>{"A", "B", "C", "D", "E"});
    g.add_directed(0, 1);
    g.add_undirected(1, 2);
    g.add_edge(2, Mark::Circle, 3, Mark::Arrow);
    g.add_edge(3, Mark::Circle, 4, Mark::Circle);
    g.add_edge(0, Mark::Arrow, 4, Mark::Arrow);
    std::string text = graph_to_string(g);
    EXPECT_EQ(graph_from_string(text), g);
    EXPECT_NE(text.find("C o-> D"), std::string::npos);
    EXPECT_NE(text.find("A <-> E"), std::string::npos);
}

TEST(GraphIo, WhitespaceTolerant) {
    const std::string text = "Graph Nodes:\r\n A ; B;C \r\nGraph Edges:\r\n1.  A -->  B\r\n 2. C --- B\r\n";
    MixedGraph g = graph_from_string(text);
    EXPECT_TRUE(g.is_directed(0, 1));
    EXPECT_TRUE(g.is_undirected(1, 2));
}

TEST(GraphIo, RejectsUnknownNode) {
    EXPECT_THROW(graph_from_string("Graph Nodes:\nA;B\nGraph Edges:\n1. A --> Z\n"), GraphError);
}

TEST(ConsistentExtension, SixNodeClassesRoundTrip) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        MixedGraph dag = oracle::random_dag(6, 0.4, rng);
        MixedGraph cp = cpdag_of(dag);
        MixedGraph ext = consistent_extension(cp);
        EXPECT_FALSE(oracle::has_cycle(oracle::directed_matrix(ext)));
        EXPECT_EQ(cpdag_of(ext), cp);
    }
}
