#include <algorithm>

#include "bnbench/learn.hpp"
#include "learn_internal.hpp"

namespace bnbench {

FciResult gfci(IndependenceTest& test, LocalScore& score, const FgesParams& fp, const FciParams& cp) {
    if (!(cp.alpha > 0.0 && cp.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
    if (test.names() != score.names()) throw LearnError("test and score cover different variables");
    const MixedGraph scored = fges(score, fp);

    FciResult res{scored.skeleton(), {}};
    MixedGraph& g = res.pag;
    for (const auto& e : scored.edges()) {
        bool removed = false;
        for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
            auto pool = detail::without(g.adjacents(x), y);
            int limit = static_cast<int>(pool.size());
            if (cp.depth >= 0) limit = std::min(limit, cp.depth);
            for (int size = 0; size <= limit && !removed; ++size)
                removed = detail::for_each_combination(pool, size, [&](const std::vector<int>& s) {
                    auto r = test.test(x, y, s);
                    if (!r.independent) return false;
                    g.remove_edge(x, y);
                    res.sepsets.set(x, y, s, r.p_value);
                    return true;
                });
            if (removed) break;
        }
    }

    auto orient_colliders = [&]() {
        detail::reset_to_circles(g);
        const MixedGraph before = g;
        for (const auto& t : unshielded_triples(before)) {
            bool fges_collider = scored.endpoint(t.x, t.y) == Mark::Arrow && scored.endpoint(t.z, t.y) == Mark::Arrow &&
                                 !scored.adjacent(t.x, t.z);
            bool sepset_collider = scored.adjacent(t.x, t.z) && !res.sepsets.in_sepset(t.x, t.z, t.y);
            if (fges_collider || sepset_collider) {
                g.set_endpoint(t.x, t.y, Mark::Arrow);
                g.set_endpoint(t.z, t.y, Mark::Arrow);
            }
        }
    };
    orient_colliders();
    if (detail::possible_dsep_stage(g, res.sepsets, test, cp.depth, cp.possible_dsep_depth)) orient_colliders();
    detail::apply_fci_rules(g, res.sepsets, cp, nullptr);
    return res;
}

MixedGraph gfci(const Dataset& d, const FgesParams& fp, const FciParams& cp) {
    if (d.has_missing()) throw LearnError("score-based search requires complete data");
    if (!(cp.alpha > 0.0 && cp.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
    DataIndependenceTest test(d, cp.alpha);
    DataLocalScore score(d, fp.score_kind, fp.score);
    return gfci(test, score, fp, cp).pag;
}

}  // namespace bnbench
