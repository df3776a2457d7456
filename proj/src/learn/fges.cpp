#include <algorithm>
#include <deque>
#include <limits>

#include "bnbench/learn.hpp"
#include "bnbench/orientation.hpp"
#include "learn_internal.hpp"

namespace bnbench {
namespace {

using detail::for_each_combination;

std::vector<int> set_union(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// True if some path from `from` to `to` made of undirected edges and edges
// directed away from the walker avoids every node in `blocked`.
bool semi_directed_path(const MixedGraph& g, NodeId from, NodeId to, const std::vector<int>& blocked) {
    std::vector<char> seen(static_cast<std::size_t>(g.num_nodes()), 0);
    for (int b : blocked) seen[b] = 1;
    std::deque<NodeId> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : g.adjacents(u)) {
            if (!(g.is_directed(u, v) || g.is_undirected(u, v))) continue;
            if (v == to) return true;
            if (seen[v]) continue;
            seen[v] = 1;
            queue.push_back(v);
        }
    }
    return false;
}

struct Move {
    double delta = 0.0;
    NodeId x = -1;
    NodeId y = -1;
    std::vector<int> subset;
};

class Search {
public:
    Search(LocalScore& score, const FgesParams& p)
        : score_(score), p_(p), g_(score.names()) {}

    MixedGraph run() {
        const int n = g_.num_nodes();
        if (p_.faithfulness_speedup) {
            useful_.assign(static_cast<std::size_t>(n * n), 0);
            for (NodeId y = 0; y < n; ++y)
                for (NodeId x = 0; x < n; ++x)
                    if (x != y) {
                        std::vector<int> pa{x};
                        useful_[x * n + y] = score_.local(y, pa) - score_.local(y, {}) > 0.0;
                    }
        }
        while (forward_step()) {}
        while (backward_step()) {}
        return g_;
    }

private:
    double family(NodeId y, const std::vector<int>& parents) { return score_.local(y, parents); }

    bool forward_step() {
        const int n = g_.num_nodes();
        Move best;
        for (NodeId y = 0; y < n; ++y) {
            if (static_cast<int>(g_.adjacents(y).size()) >= p_.max_degree) continue;
            const auto ne_y = g_.neighbors(y);
            const auto pa_y = g_.parents(y);
            for (NodeId x = 0; x < n; ++x) {
                if (x == y || g_.adjacent(x, y)) continue;
                if (static_cast<int>(g_.adjacents(x).size()) >= p_.max_degree) continue;
                if (!useful_.empty() && !useful_[x * n + y]) continue;
                const auto adj_x = g_.adjacents(x);
                const auto na = intersect(ne_y, adj_x);
                const auto free = minus(ne_y, adj_x);
                for (int size = 0; size <= static_cast<int>(free.size()); ++size) {
                    for_each_combination(free, size, [&](const std::vector<int>& t) {
                        auto s = set_union(na, t);
                        if (!is_clique(g_, s)) return false;
                        if (semi_directed_path(g_, y, x, s)) return false;
                        auto base = set_union(s, pa_y);
                        auto with_x = set_union(base, {x});
                        double delta = family(y, with_x) - family(y, base);
                        if (delta > best.delta) best = {delta, x, y, t};
                        return false;
                    });
                }
            }
        }
        if (best.x < 0) return false;
        g_.add_directed(best.x, best.y);
        for (int t : best.subset) g_.orient(t, best.y);
        rebuild();
        return true;
    }

    bool backward_step() {
        const int n = g_.num_nodes();
        Move best;
        for (NodeId y = 0; y < n; ++y) {
            const auto ne_y = g_.neighbors(y);
            const auto pa_y = g_.parents(y);
            for (NodeId x : g_.adjacents(y)) {
                if (!(g_.is_directed(x, y) || g_.is_undirected(x, y))) continue;
                const auto na = intersect(ne_y, g_.adjacents(x));
                const auto pa_rest = detail::without(pa_y, x);
                for (int size = 0; size <= static_cast<int>(na.size()); ++size) {
                    for_each_combination(na, size, [&](const std::vector<int>& h) {
                        auto s = minus(na, h);
                        if (!is_clique(g_, s)) return false;
                        auto base = set_union(s, pa_rest);
                        auto with_x = set_union(base, {x});
                        double delta = family(y, base) - family(y, with_x);
                        if (delta > best.delta) best = {delta, x, y, h};
                        return false;
                    });
                }
            }
        }
        if (best.x < 0) return false;
        const NodeId x = best.x;
        const NodeId y = best.y;
        g_.remove_edge(x, y);
        for (int h : best.subset) {
            if (g_.is_undirected(y, h)) g_.orient(y, h);
            if (g_.is_undirected(x, h)) g_.orient(x, h);
        }
        rebuild();
        return true;
    }

    void rebuild() { g_ = cpdag_of(consistent_extension(g_)); }

    LocalScore& score_;
    FgesParams p_;
    MixedGraph g_;
    std::vector<char> useful_;
};

}  // namespace

MixedGraph fges(LocalScore& score, const FgesParams& p) {
    if (p.max_degree < 1) throw LearnError("max_degree must be positive");
    return Search(score, p).run();
}

MixedGraph fges(const Dataset& d, const FgesParams& p) {
    if (d.has_missing()) throw LearnError("score-based search requires complete data");
    DataLocalScore score(d, p.score_kind, p.score);
    return fges(score, p);
}

MixedGraph images_bdeu(const std::vector<Dataset>& datasets, const FgesParams& p) {
    if (datasets.empty()) throw LearnError("at least one dataset is required");
    for (const auto& d : datasets) {
        if (d.has_missing()) throw LearnError("score-based search requires complete data");
        if (d.variables() != datasets.front().variables())
            throw LearnError("datasets do not share variable definitions");
    }
    MeanBdeuScore score(datasets, p.score);
    return fges(score, p);
}

}  // namespace bnbench
