#ifndef BNBENCH_TEST_ORACLES_HPP
#define BNBENCH_TEST_ORACLES_HPP

// Brute-force reference implementations used to check the library. They
// favour obviousness over speed and share no code with src/.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bnbench/graph.hpp"
#include "bnbench/model.hpp"

namespace oracle {

using bnbench::MixedGraph;

std::vector<std::string> node_names(int n);

/// Random DAG: each pair (i < j) of a random permutation gets an edge with
/// probability p.
MixedGraph random_dag(int n, double p, std::mt19937_64& rng);

/// Adjacency-matrix form of a directed graph; adj[i][j] means i -> j.
using Matrix = std::vector<std::vector<int>>;
Matrix directed_matrix(const MixedGraph& g);

/// Cycle check by trying every simple path (exponential; n <= 7).
bool has_cycle(const Matrix& adj);

/// d-separation by enumerating every simple undirected path between x and y
/// and checking each for an active status.
bool d_separated_paths(const Matrix& adj, int x, int y, const std::vector<int>& z);

/// All DAGs over n <= 5 nodes.
std::vector<Matrix> all_dags(int n);

/// Equivalence class of `dag`: DAGs with the same skeleton and the same
/// unshielded colliders.
std::vector<Matrix> markov_class(const Matrix& dag);

/// CPDAG computed from the class: an edge is directed iff every member agrees.
MixedGraph cpdag_from_class(const std::vector<std::string>& names, const std::vector<Matrix>& members);

/// Joint probability of a full assignment as a plain CPT product.
double joint(const bnbench::DiscreteBN& bn, const std::vector<int>& assignment);

/// P(target | evidence) by summing the full joint over all assignments.
std::vector<double> brute_posterior(const bnbench::DiscreteBN& bn, int target, const std::vector<int>& evidence);

/// Random BN with the given DAG and arities; CPT rows uniform on the simplex.
bnbench::DiscreteBN random_bn(const MixedGraph& dag, const std::vector<int>& arities, std::mt19937_64& rng);

/// Per node, the L1 distance of each CPT row weighted by how often its parent
/// configuration occurs in `d`; the worst node is returned.
double weighted_l1(const bnbench::DiscreteBN& a, const bnbench::DiscreteBN& b, const bnbench::Dataset& d);

}  // namespace oracle

#endif  // BNBENCH_TEST_ORACLES_HPP
