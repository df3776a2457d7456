#ifndef BNBENCH_LEARN_HPP
#define BNBENCH_LEARN_HPP

#include <string>
#include <vector>

#include "bnbench/data.hpp"
#include "bnbench/graph.hpp"
#include "bnbench/indtest.hpp"
#include "bnbench/score.hpp"

namespace bnbench {

enum class ColliderRule { Sepset, Conservative, MaxP };

struct PcParams {
    double alpha = 0.01;
    /// Maximum conditioning-set size; -1 is unlimited.
    int depth = -1;
    bool stable = false;
    ColliderRule collider_rule = ColliderRule::Sepset;
    bool maxp_heuristic = true;
    int maxp_depth = 3;
};

/// Named variants: "pc", "cpc", "pc-stable", "cpc-stable", "pc-max".
PcParams pc_preset(const std::string& name);

struct FciParams {
    double alpha = 0.01;
    int depth = -1;
    bool stable = false;
    /// -1 is unlimited.
    int max_discriminating_path = -1;
    bool complete_rule_set = false;
    /// Conservative collider voting (CFCI).
    bool conservative = false;
    /// Conditioning-set bound in the possible-D-SEP stage; -1 is unlimited.
    int possible_dsep_depth = 3;
};

struct FgesParams {
    LocalScoreParams score;
    bool faithfulness_speedup = false;
    /// Upper bound on a node's degree after an insertion.
    int max_degree = 100;
    ScoreKind score_kind = ScoreKind::Bic;
};

struct AdjacencySearch {
    MixedGraph skeleton;
    SepsetMap sepsets;
};

/// Fast adjacency search from the complete undirected graph.
AdjacencySearch fas(IndependenceTest& test, int depth = -1, bool stable = false);

struct PcResult {
    MixedGraph cpdag;
    SepsetMap sepsets;
    int collider_conflicts = 0;
    int orientation_conflicts = 0;
    /// Triples left unoriented by conservative voting.
    std::vector<UnshieldedTriple> ambiguous;
};

PcResult pc(IndependenceTest& test, const PcParams& p);
MixedGraph pc(const Dataset& d, const PcParams& p);

/// Greedy equivalence search over CPDAGs with the given local score.
MixedGraph fges(LocalScore& score, const FgesParams& p);
/// Requires complete data.
MixedGraph fges(const Dataset& d, const FgesParams& p);

/// FGES driven by the mean per-dataset BDeu score.
MixedGraph images_bdeu(const std::vector<Dataset>& datasets, const FgesParams& p);

enum class FciVariant { Fci, Rfci };

struct FciResult {
    MixedGraph pag;
    SepsetMap sepsets;
};

FciResult fci(IndependenceTest& test, const FciParams& p, FciVariant variant = FciVariant::Fci);
MixedGraph fci(const Dataset& d, const FciParams& p, FciVariant variant = FciVariant::Fci);

/// FGES adjacencies pruned by CI tests, FGES colliders, FCI rules.
FciResult gfci(IndependenceTest& test, LocalScore& score, const FgesParams& fp, const FciParams& cp);
MixedGraph gfci(const Dataset& d, const FgesParams& fp, const FciParams& cp);

class LearnError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Algorithm names accepted by `learn_by_name`.
const std::vector<std::string>& algorithm_names();

struct AlgorithmOptions {
    double alpha = 0.01;
    int depth = -1;
    LocalScoreParams score;
    bool faithfulness_speedup = false;
    int max_degree = 100;
    int maxp_depth = 3;
    bool maxp_heuristic = true;
    int max_discriminating_path = -1;
    bool complete_rule_set = false;
    int possible_dsep_depth = 3;
    /// "bic" or "bdeu"; empty uses the algorithm default.
    std::string score_kind;
};

/// Runs one named algorithm. Score-based algorithms throw LearnError on
/// incomplete data.
MixedGraph learn_by_name(const std::string& name, const Dataset& d, const AlgorithmOptions& options = {});

}  // namespace bnbench

#endif  // BNBENCH_LEARN_HPP
