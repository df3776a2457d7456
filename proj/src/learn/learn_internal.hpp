#ifndef BNBENCH_LEARN_INTERNAL_HPP
#define BNBENCH_LEARN_INTERNAL_HPP

#include <vector>

#include "bnbench/learn.hpp"

namespace bnbench::detail {

/// Calls f(subset) for each size-k subset of `pool` in lexicographic order of
/// positions; stops early when f returns true. Returns whether it stopped.
template <typename F>
bool for_each_combination(const std::vector<int>& pool, int k, F&& f) {
    const int n = static_cast<int>(pool.size());
    if (k < 0 || k > n) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> subset(static_cast<std::size_t>(k));
    for (;;) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (f(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<int> without(std::vector<int> v, int x);

/// Separating sets of x and z among subsets of adj(x)\{z} and adj(z)\{x}
/// with size <= max_size (-1 unlimited), as tested on `g`.
struct SeparatorVote {
    int with_y = 0;
    int without_y = 0;
    double best_p = -1.0;
    bool best_contains_y = false;
};
SeparatorVote vote_separators(IndependenceTest& test, const MixedGraph& g, int x, int y, int z, int max_size);

/// Applies FCI collider orientation R0 on a graph whose edges are all o-o.
void orient_pag_colliders(MixedGraph& g, const SepsetMap& sepsets, IndependenceTest* conservative_test, int depth);

/// Possible-D-SEP removal stage with conditioning sets bounded by both
/// `depth` and `max_size` (-1 unlimited). Returns true if an edge was removed.
bool possible_dsep_stage(MixedGraph& g, SepsetMap& sepsets, IndependenceTest& test, int depth, int max_size);

/// FCI orientation rules to a fixpoint. With `rfci_test`, the discriminating
/// path rule first re-tests consecutive path pairs and may delete edges.
void apply_fci_rules(MixedGraph& g, SepsetMap& sepsets, const FciParams& p, IndependenceTest* rfci_test);

/// All edges reset to o-o.
void reset_to_circles(MixedGraph& g);

}  // namespace bnbench::detail

#endif  // BNBENCH_LEARN_INTERNAL_HPP
