#ifndef BNBENCH_EVAL_HPP
#define BNBENCH_EVAL_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnbench/graph.hpp"

namespace bnbench {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arc agreement of a learned DAG against a reference DAG. `m + r + d == t`.
struct ArcComparison {
    int a = 0;  ///< learned arcs on pairs absent from the reference skeleton
    int d = 0;  ///< reference arcs whose pair is absent from the learned graph
    int r = 0;  ///< reference arcs present with the opposite direction
    int m = 0;  ///< reference arcs present with the same direction
    int t = 0;  ///< reference arc count

    bool operator==(const ArcComparison&) const = default;
};

/// Both graphs must be directed-only over the same node names (matched by
/// name, so the node order may differ).
ArcComparison arc_comparison(const MixedGraph& learned, const MixedGraph& reference);

/// (m + r/2 - a - d) / t. Throws EvalError when t == 0.
double ddm(const ArcComparison& c);
double ddm(double m, double r, double a, double d, double t);

/// Skeleton additions + deletions + endpoint mismatches on shared pairs.
int shd(const MixedGraph& learned, const MixedGraph& reference);

struct AucResult {
    /// NaN where the state had no positive or no negative rows.
    std::vector<double> per_state;
    /// Prevalence-weighted mean over defined states; NaN when none is defined.
    double summary = 0.0;
    bool summary_defined = false;
};

/// Mann-Whitney AUC of `scores` for positives vs the rest, ties at midrank.
/// NaN when either class is empty.
double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive);

/// One-vs-rest AUC per state. Each posterior row has one entry per state.
AucResult auc_ovr(const std::vector<std::vector<double>>& posteriors, const std::vector<int>& labels);

/// 100 * correct / scored. Entries with label < 0 are excluded. Throws when
/// nothing is scored.
double cc(const std::vector<int>& predictions, const std::vector<int>& labels);

/// One test's metric values per model; higher is better, NaN means absent.
using MetricTable = std::vector<std::pair<std::string, double>>;

struct RankFrequency {
    int in_top = 0;
    int appearances = 0;
    double percentage = 0.0;
};

/// Per-model share of tests in which the model is among the top `k` values,
/// where every model tied with the k-th value also counts. Tests in which a
/// model is absent do not enter its denominator.
std::map<std::string, RankFrequency> rank_summary(const std::vector<MetricTable>& tests, int k = 3);

}  // namespace bnbench

#endif  // BNBENCH_EVAL_HPP
