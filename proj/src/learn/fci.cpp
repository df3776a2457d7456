#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "bnbench/learn.hpp"
#include "learn_internal.hpp"

namespace bnbench {
namespace detail {
namespace {

constexpr Mark kTail = Mark::Tail;
constexpr Mark kArrow = Mark::Arrow;
constexpr Mark kCircle = Mark::Circle;

// Mark at `at` on the edge between `at` and `other`.
Mark mark_at(const MixedGraph& g, NodeId at, NodeId other) { return g.endpoint(other, at); }

void set_mark(MixedGraph& g, NodeId at, NodeId other, Mark m) { g.set_endpoint(other, at, m); }

bool is_collider_on(const MixedGraph& g, NodeId a, NodeId b, NodeId c) {
    return mark_at(g, b, a) == kArrow && mark_at(g, b, c) == kArrow;
}

// Nodes reachable from x by paths on which every interior node is a
// collider or sits in a triangle with its path neighbours.
std::vector<int> possible_dsep(const MixedGraph& g, NodeId x, NodeId y) {
    const int n = g.num_nodes();
    std::vector<char> seen_edge(static_cast<std::size_t>(n * n), 0);
    std::vector<char> member(static_cast<std::size_t>(n), 0);
    std::deque<std::pair<NodeId, NodeId>> queue;
    for (NodeId b : g.adjacents(x)) {
        seen_edge[x * n + b] = 1;
        member[b] = 1;
        queue.emplace_back(x, b);
    }
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        for (NodeId c : g.adjacents(b)) {
            if (c == a || c == x) continue;
            if (!(is_collider_on(g, a, b, c) || g.adjacent(a, c))) continue;
            if (seen_edge[b * n + c]) continue;
            seen_edge[b * n + c] = 1;
            member[c] = 1;
            queue.emplace_back(b, c);
        }
    }
    std::vector<int> out;
    for (NodeId v = 0; v < n; ++v)
        if (member[v] && v != x && v != y) out.push_back(v);
    return out;
}

// Searches a discriminating path <theta, ..., a, b, c> for b with the
// collider-and-parent-of-c chain starting at a. Returns the path from theta
// to a (theta first), or empty when none exists.
std::vector<NodeId> discriminating_path(const MixedGraph& g, NodeId a, NodeId b, NodeId c, int max_length) {
    const int n = g.num_nodes();
    std::vector<NodeId> prev(static_cast<std::size_t>(n), -2);
    std::vector<int> dist(static_cast<std::size_t>(n), 0);
    prev[a] = -1;
    prev[b] = prev[c] = -3;
    std::deque<NodeId> queue{a};
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        // Path theta ... v a b c has dist[v] + 3 edges once theta is added.
        if (max_length >= 0 && dist[v] + 3 > max_length) continue;
        for (NodeId w : g.adjacents(v)) {
            if (prev[w] != -2) continue;
            if (mark_at(g, v, w) != kArrow) continue;
            if (!g.adjacent(w, c)) {
                std::vector<NodeId> path{w};
                for (NodeId u = v; u != -1; u = prev[u]) path.push_back(u);
                return path;
            }
            if (g.is_directed(w, c) && mark_at(g, w, v) == kArrow) {
                prev[w] = v;
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return {};
}

// Uncovered potentially directed paths from `from` to `to` (simple paths;
// each edge u-v has no arrowhead at u and no tail at v). Calls `visit` with
// each path; stops when it returns true.
bool uncovered_pd_paths(const MixedGraph& g, NodeId from, NodeId to, int max_length,
                        const std::function<bool(const std::vector<NodeId>&)>& visit) {
    std::vector<NodeId> path{from};
    std::vector<char> on_path(static_cast<std::size_t>(g.num_nodes()), 0);
    on_path[from] = 1;
    long budget = 200000;
    std::function<bool()> extend = [&]() -> bool {
        if (--budget < 0) return false;
        NodeId u = path.back();
        for (NodeId v : g.adjacents(u)) {
            if (on_path[v]) continue;
            if (mark_at(g, u, v) == kArrow || mark_at(g, v, u) == kTail) continue;
            if (path.size() >= 2 && g.adjacent(path[path.size() - 2], v)) continue;
            path.push_back(v);
            if (v == to) {
                if (visit(path)) return true;
            } else if (max_length < 0 || static_cast<int>(path.size()) <= max_length) {
                on_path[v] = 1;
                if (extend()) return true;
                on_path[v] = 0;
            }
            path.pop_back();
        }
        return false;
    };
    return extend();
}

// Uncovered circle path from a to b (every edge o-o), used by the
// selection-bias rule.
std::vector<NodeId> uncovered_circle_path(const MixedGraph& g, NodeId a, NodeId b) {
    std::vector<NodeId> path{a};
    std::vector<char> on_path(static_cast<std::size_t>(g.num_nodes()), 0);
    on_path[a] = 1;
    long budget = 200000;
    std::vector<NodeId> found;
    std::function<bool()> extend = [&]() -> bool {
        if (--budget < 0) return false;
        NodeId u = path.back();
        for (NodeId v : g.adjacents(u)) {
            if (on_path[v]) continue;
            if (mark_at(g, u, v) != kCircle || mark_at(g, v, u) != kCircle) continue;
            if (path.size() >= 2 && g.adjacent(path[path.size() - 2], v)) continue;
            if (path.size() == 1 && (v == b || g.adjacent(v, b))) continue;
            if (v == b) {
                if (path.size() >= 3 && !g.adjacent(path.back(), a) && !g.adjacent(path[path.size() - 2], b)) {
                    path.push_back(v);
                    found = path;
                    return true;
                }
                continue;
            }
            path.push_back(v);
            on_path[v] = 1;
            if (extend()) return true;
            on_path[v] = 0;
            path.pop_back();
        }
        return false;
    };
    extend();
    return found;
}

class RuleEngine {
public:
    RuleEngine(MixedGraph& g, SepsetMap& sepsets, const FciParams& p, IndependenceTest* rfci)
        : g_(g), sepsets_(sepsets), p_(p), rfci_(rfci) {}

    void run() {
        bool changed = true;
        while (changed) {
            changed = false;
            changed |= rules_1_to_3();
            changed |= rule_4();
            if (p_.complete_rule_set) {
                changed |= rule_5();
                changed |= rules_6_7();
                changed |= rules_8_to_10();
            }
        }
    }

private:
    bool rules_1_to_3() {
        bool changed = false;
        const int n = g_.num_nodes();
        for (NodeId b = 0; b < n; ++b) {
            const auto adj = g_.adjacents(b);
            for (NodeId a : adj)
                for (NodeId c : adj) {
                    if (a == c) continue;
                    // a *-> b o-* c, a and c not adjacent: b -> c.
                    if (mark_at(g_, b, a) == kArrow && mark_at(g_, b, c) == kCircle && !g_.adjacent(a, c)) {
                        set_mark(g_, b, c, kTail);
                        set_mark(g_, c, b, kArrow);
                        changed = true;
                    }
                    // a -> b *-> c or a *-> b -> c, with a *-o c: a *-> c.
                    if (g_.adjacent(a, c) && mark_at(g_, c, a) == kCircle) {
                        bool chain1 = g_.is_directed(a, b) && mark_at(g_, c, b) == kArrow;
                        bool chain2 = mark_at(g_, b, a) == kArrow && g_.is_directed(b, c);
                        if (chain1 || chain2) {
                            set_mark(g_, c, a, kArrow);
                            changed = true;
                        }
                    }
                }
            // a *-> b <-* c, a *-o t o-* c, a and c not adjacent, t *-o b: t *-> b.
            for (NodeId t : adj) {
                if (mark_at(g_, b, t) != kCircle) continue;
                const auto around = g_.adjacents(t);
                bool fire = false;
                for (std::size_t i = 0; i < around.size() && !fire; ++i)
                    for (std::size_t j = i + 1; j < around.size() && !fire; ++j) {
                        NodeId a = around[i], c = around[j];
                        if (a == b || c == b || g_.adjacent(a, c)) continue;
                        if (!g_.adjacent(a, b) || !g_.adjacent(c, b)) continue;
                        if (mark_at(g_, b, a) == kArrow && mark_at(g_, b, c) == kArrow &&
                            mark_at(g_, t, a) == kCircle && mark_at(g_, t, c) == kCircle)
                            fire = true;
                    }
                if (fire) {
                    set_mark(g_, b, t, kArrow);
                    changed = true;
                }
            }
        }
        return changed;
    }

    bool rule_4() {
        const int n = g_.num_nodes();
        for (NodeId c = 0; c < n; ++c)
            for (NodeId b : g_.adjacents(c)) {
                if (mark_at(g_, b, c) != kCircle) continue;
                for (NodeId a : g_.adjacents(b)) {
                    if (a == c || !g_.is_directed(a, c)) continue;
                    if (mark_at(g_, a, b) != kArrow) continue;
                    auto path = discriminating_path(g_, a, b, c, p_.max_discriminating_path);
                    if (path.empty()) continue;
                    const NodeId theta = path.front();
                    if (rfci_ && retest_path(path, b, c, theta)) return true;
                    if (sepsets_.in_sepset(theta, c, b)) {
                        set_mark(g_, b, c, kTail);
                        set_mark(g_, c, b, kArrow);
                    } else {
                        set_mark(g_, b, a, kArrow);
                        set_mark(g_, a, b, kArrow);
                        set_mark(g_, b, c, kArrow);
                        set_mark(g_, c, b, kArrow);
                    }
                    return true;
                }
            }
        return false;
    }

    // RFCI: before using a discriminating path, check that consecutive path
    // pairs are still dependent given sepset(theta, c). Removes the first
    // failing edge and reports whether anything changed.
    bool retest_path(std::vector<NodeId> path, NodeId b, NodeId c, NodeId theta) {
        const Sepset* sep = sepsets_.get(theta, c);
        if (sep == nullptr) return false;
        path.push_back(b);
        path.push_back(c);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            NodeId u = path[i], v = path[i + 1];
            std::vector<int> s;
            for (int w : sep->set)
                if (w != u && w != v) s.push_back(w);
            auto r = rfci_->test(u, v, s);
            if (r.independent) {
                g_.remove_edge(u, v);
                sepsets_.set(u, v, s, r.p_value);
                return true;
            }
        }
        return false;
    }

    bool rule_5() {
        const int n = g_.num_nodes();
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b : g_.adjacents(a)) {
                if (b < a || mark_at(g_, a, b) != kCircle || mark_at(g_, b, a) != kCircle) continue;
                auto path = uncovered_circle_path(g_, a, b);
                if (path.empty()) continue;
                set_mark(g_, a, b, kTail);
                set_mark(g_, b, a, kTail);
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    set_mark(g_, path[i], path[i + 1], kTail);
                    set_mark(g_, path[i + 1], path[i], kTail);
                }
                return true;
            }
        return false;
    }

    bool rules_6_7() {
        bool changed = false;
        const int n = g_.num_nodes();
        for (NodeId b = 0; b < n; ++b)
            for (NodeId a : g_.adjacents(b))
                for (NodeId c : g_.adjacents(b)) {
                    if (a == c || mark_at(g_, b, c) != kCircle) continue;
                    bool r6 = g_.is_undirected(a, b);
                    bool r7 = mark_at(g_, a, b) == kTail && mark_at(g_, b, a) == kCircle && !g_.adjacent(a, c);
                    if (r6 || r7) {
                        set_mark(g_, b, c, kTail);
                        changed = true;
                    }
                }
        return changed;
    }

    bool rules_8_to_10() {
        bool changed = false;
        const int n = g_.num_nodes();
        for (NodeId a = 0; a < n; ++a)
            for (NodeId c : g_.adjacents(a)) {
                // a o-> c
                if (mark_at(g_, a, c) != kCircle || mark_at(g_, c, a) != kArrow) continue;
                if (rule_8(a, c) || rule_9(a, c) || rule_10(a, c)) {
                    set_mark(g_, a, c, kTail);
                    changed = true;
                }
            }
        return changed;
    }

    bool rule_8(NodeId a, NodeId c) {
        for (NodeId b : g_.adjacents(a)) {
            if (b == c || !g_.is_directed(b, c)) continue;
            if (g_.is_directed(a, b)) return true;
            if (mark_at(g_, a, b) == kTail && mark_at(g_, b, a) == kCircle) return true;
        }
        return false;
    }

    bool rule_9(NodeId a, NodeId c) {
        for (NodeId b : g_.adjacents(a)) {
            if (b == c || g_.adjacent(b, c)) continue;
            if (mark_at(g_, a, b) == kArrow || mark_at(g_, b, a) == kTail) continue;
            bool found = uncovered_pd_paths(g_, b, c, p_.max_discriminating_path, [&](const std::vector<NodeId>& p) {
                // Prepend a: path a, b, ..., c must stay uncovered at b.
                return p.size() >= 2 && !g_.adjacent(a, p[1]);
            });
            if (found) return true;
        }
        return false;
    }

    bool rule_10(NodeId a, NodeId c) {
        std::vector<NodeId> into_c;
        for (NodeId v : g_.adjacents(c))
            if (v != a && g_.is_directed(v, c)) into_c.push_back(v);
        for (std::size_t i = 0; i < into_c.size(); ++i)
            for (std::size_t j = i + 1; j < into_c.size(); ++j) {
                NodeId beta = into_c[i], theta = into_c[j];
                if (g_.adjacent(beta, theta)) continue;
                auto starts = [&](NodeId target) {
                    std::set<NodeId> mus;
                    uncovered_pd_paths(g_, a, target, p_.max_discriminating_path,
                                       [&](const std::vector<NodeId>& p) {
                                           mus.insert(p[1]);
                                           return false;
                                       });
                    return mus;
                };
                auto m1 = starts(beta);
                if (m1.empty()) continue;
                auto m2 = starts(theta);
                for (NodeId mu : m1)
                    for (NodeId omega : m2)
                        if (mu != omega && !g_.adjacent(mu, omega)) return true;
            }
        return false;
    }

    MixedGraph& g_;
    SepsetMap& sepsets_;
    const FciParams& p_;
    IndependenceTest* rfci_;
};

}  // namespace

void reset_to_circles(MixedGraph& g) {
    for (const auto& e : g.edges()) {
        g.set_endpoint(e.a, e.b, kCircle);
        g.set_endpoint(e.b, e.a, kCircle);
    }
}

void orient_pag_colliders(MixedGraph& g, const SepsetMap& sepsets, IndependenceTest* conservative_test, int depth) {
    const MixedGraph before = g;
    for (const auto& t : unshielded_triples(before)) {
        bool collider;
        if (conservative_test != nullptr) {
            auto vote = vote_separators(*conservative_test, before, t.x, t.y, t.z, depth);
            collider = vote.with_y == 0 && vote.without_y > 0;
        } else {
            collider = !sepsets.in_sepset(t.x, t.z, t.y);
        }
        if (collider) {
            set_mark(g, t.y, t.x, kArrow);
            set_mark(g, t.y, t.z, kArrow);
        }
    }
}

bool possible_dsep_stage(MixedGraph& g, SepsetMap& sepsets, IndependenceTest& test, int depth, int max_size) {
    const MixedGraph frozen = g;
    bool removed = false;
    for (const auto& e : frozen.edges()) {
        if (!g.adjacent(e.a, e.b)) continue;
        for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
            auto pool = possible_dsep(frozen, x, y);
            const auto adj = frozen.adjacents(x);
            int limit = static_cast<int>(pool.size());
            if (depth >= 0) limit = std::min(limit, depth);
            if (max_size >= 0) limit = std::min(limit, max_size);
            bool done = false;
            for (int size = 1; size <= limit && !done; ++size) {
                done = for_each_combination(pool, size, [&](const std::vector<int>& s) {
                    // Subsets of adj(x) were already tried by the adjacency search.
                    if (std::includes(adj.begin(), adj.end(), s.begin(), s.end())) return false;
                    auto r = test.test(x, y, s);
                    if (!r.independent) return false;
                    g.remove_edge(x, y);
                    sepsets.set(x, y, s, r.p_value);
                    return true;
                });
            }
            if (done) {
                removed = true;
                break;
            }
        }
    }
    return removed;
}

void apply_fci_rules(MixedGraph& g, SepsetMap& sepsets, const FciParams& p, IndependenceTest* rfci_test) {
    RuleEngine(g, sepsets, p, rfci_test).run();
}

}  // namespace detail

namespace {

void check_fci_params(const FciParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
    if (p.depth < -1) throw LearnError("depth must be >= -1");
}

// RFCI collider stage: before orienting x *-> y <-* z, confirm x-y and z-y
// stay dependent given sepset(x, z). Failing pairs lose their edge.
void rfci_colliders(MixedGraph& g, SepsetMap& sepsets, IndependenceTest& test) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : unshielded_triples(g)) {
            if (sepsets.in_sepset(t.x, t.z, t.y)) continue;
            const Sepset* sep = sepsets.get(t.x, t.z);
            if (sep == nullptr) continue;
            for (NodeId end : {t.x, t.z}) {
                std::vector<int> s;
                for (int w : sep->set)
                    if (w != end && w != t.y) s.push_back(w);
                auto r = test.test(end, t.y, s);
                if (r.independent) {
                    g.remove_edge(end, t.y);
                    sepsets.set(end, t.y, s, r.p_value);
                    changed = true;
                    break;
                }
            }
            if (changed) break;
        }
    }
    detail::orient_pag_colliders(g, sepsets, nullptr, -1);
}

}  // namespace

FciResult fci(IndependenceTest& test, const FciParams& p, FciVariant variant) {
    check_fci_params(p);
    auto adj = fas(test, p.depth, p.stable);
    FciResult res{std::move(adj.skeleton), std::move(adj.sepsets)};
    MixedGraph& g = res.pag;
    IndependenceTest* conservative = p.conservative ? &test : nullptr;
    detail::reset_to_circles(g);
    if (variant == FciVariant::Rfci) {
        rfci_colliders(g, res.sepsets, test);
        detail::apply_fci_rules(g, res.sepsets, p, &test);
        return res;
    }
    detail::orient_pag_colliders(g, res.sepsets, conservative, p.depth);
    detail::possible_dsep_stage(g, res.sepsets, test, p.depth, p.possible_dsep_depth);
    detail::reset_to_circles(g);
    detail::orient_pag_colliders(g, res.sepsets, conservative, p.depth);
    detail::apply_fci_rules(g, res.sepsets, p, nullptr);
    return res;
}

MixedGraph fci(const Dataset& d, const FciParams& p, FciVariant variant) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
    DataIndependenceTest test(d, p.alpha);
    return fci(test, p, variant).pag;
}

}  // namespace bnbench
