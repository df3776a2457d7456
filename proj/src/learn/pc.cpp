#include <algorithm>
#include <set>

#include "bnbench/learn.hpp"
#include "bnbench/orientation.hpp"
#include "learn_internal.hpp"

namespace bnbench {
namespace detail {

std::vector<int> without(std::vector<int> v, int x) {
    v.erase(std::remove(v.begin(), v.end(), x), v.end());
    return v;
}

SeparatorVote vote_separators(IndependenceTest& test, const MixedGraph& g, int x, int y, int z, int max_size) {
    SeparatorVote vote;
    std::set<std::vector<int>> seen;
    for (const auto& pool : {without(g.adjacents(x), z), without(g.adjacents(z), x)}) {
        const int limit = max_size < 0 ? static_cast<int>(pool.size())
                                       : std::min(max_size, static_cast<int>(pool.size()));
        for (int size = 0; size <= limit; ++size) {
            for_each_combination(pool, size, [&](const std::vector<int>& s) {
                if (!seen.insert(s).second) return false;
                auto r = test.test(x, z, s);
                bool has_y = std::find(s.begin(), s.end(), y) != s.end();
                if (r.independent) (has_y ? vote.with_y : vote.without_y)++;
                if (r.p_value > vote.best_p) {
                    vote.best_p = r.p_value;
                    vote.best_contains_y = has_y;
                }
                return false;
            });
        }
    }
    return vote;
}

}  // namespace detail

using detail::for_each_combination;
using detail::without;

PcParams pc_preset(const std::string& name) {
    PcParams p;
    if (name == "pc") return p;
    if (name == "pc-stable") {
        p.stable = true;
        return p;
    }
    if (name == "cpc" || name == "cpc-stable") {
        p.collider_rule = ColliderRule::Conservative;
        p.stable = name == "cpc-stable";
        return p;
    }
    if (name == "pc-max") {
        p.collider_rule = ColliderRule::MaxP;
        return p;
    }
    throw LearnError("unknown PC variant: " + name);
}

AdjacencySearch fas(IndependenceTest& test, int depth, bool stable) {
    if (depth < -1) throw LearnError("depth must be >= -1");
    AdjacencySearch out{MixedGraph::complete_undirected(test.names()), {}};
    MixedGraph& g = out.skeleton;
    const int n = g.num_nodes();
    for (int level = 0;; ++level) {
        std::vector<std::vector<int>> frozen;
        if (stable)
            for (NodeId v = 0; v < n; ++v) frozen.push_back(g.adjacents(v));
        for (NodeId x = 0; x < n; ++x) {
            const auto candidates = stable ? frozen[x] : g.adjacents(x);
            for (NodeId y : candidates) {
                if (!g.adjacent(x, y)) continue;
                auto pool = without(stable ? frozen[x] : g.adjacents(x), y);
                if (static_cast<int>(pool.size()) < level) continue;
                for_each_combination(pool, level, [&](const std::vector<int>& s) {
                    auto r = test.test(x, y, s);
                    if (!r.independent) return false;
                    g.remove_edge(x, y);
                    out.sepsets.set(x, y, s, r.p_value);
                    return true;
                });
            }
        }
        if (level == depth) break;
        bool deeper = false;
        for (NodeId v = 0; v < n && !deeper; ++v)
            if (static_cast<int>(g.adjacents(v).size()) - 1 > level) deeper = true;
        if (!deeper) break;
    }
    return out;
}

PcResult pc(IndependenceTest& test, const PcParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
    auto adj = fas(test, p.depth, p.stable);
    PcResult res;
    res.sepsets = std::move(adj.sepsets);
    MixedGraph g = std::move(adj.skeleton);
    const MixedGraph skeleton = g;

    struct Candidate {
        UnshieldedTriple t;
        double p_value;
    };
    std::vector<Candidate> colliders;
    std::set<UnshieldedTriple> ambiguous;
    for (const auto& t : unshielded_triples(skeleton)) {
        switch (p.collider_rule) {
            case ColliderRule::Sepset:
                if (!res.sepsets.in_sepset(t.x, t.z, t.y)) colliders.push_back({t, 0.0});
                break;
            case ColliderRule::Conservative: {
                auto vote = detail::vote_separators(test, skeleton, t.x, t.y, t.z, p.depth);
                if (vote.with_y == 0 && vote.without_y > 0)
                    colliders.push_back({t, 0.0});
                else if (vote.with_y == 0 || vote.without_y > 0)
                    ambiguous.insert(t);
                break;
            }
            case ColliderRule::MaxP: {
                int bound = p.maxp_heuristic ? p.maxp_depth : p.depth;
                if (p.depth >= 0 && bound >= 0) bound = std::min(bound, p.depth);
                auto vote = detail::vote_separators(test, skeleton, t.x, t.y, t.z, bound);
                if (!vote.best_contains_y) colliders.push_back({t, vote.best_p});
                break;
            }
        }
    }
    if (p.collider_rule == ColliderRule::MaxP)
        std::stable_sort(colliders.begin(), colliders.end(),
                         [](const Candidate& a, const Candidate& b) { return a.p_value > b.p_value; });

    for (const auto& c : colliders) {
        const auto& t = c.t;
        if (g.is_directed(t.y, t.x) || g.is_directed(t.y, t.z)) {
            ++res.collider_conflicts;
            continue;
        }
        g.orient(t.x, t.y);
        g.orient(t.z, t.y);
    }
    res.cpdag = meek_closure(g, ambiguous, &res.orientation_conflicts);
    res.ambiguous.assign(ambiguous.begin(), ambiguous.end());
    return res;
}

MixedGraph pc(const Dataset& d, const PcParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
    DataIndependenceTest test(d, p.alpha);
    return pc(test, p).cpdag;
}

}  // namespace bnbench
