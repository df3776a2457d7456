#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace oracle {

std::vector<std::string> node_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
    return names;
}

MixedGraph random_dag(int n, double p, std::mt19937_64& rng) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(p);
    MixedGraph g(node_names(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) g.add_directed(perm[i], perm[j]);
    return g;
}

Matrix directed_matrix(const MixedGraph& g) {
    const int n = g.num_nodes();
    Matrix m(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.is_directed(i, j)) m[i][j] = 1;
    return m;
}

bool has_cycle(const Matrix& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> path;
    std::function<bool(int)> walk = [&](int v) {
        for (int w = 0; w < n; ++w) {
            if (!adj[v][w]) continue;
            if (w == path.front()) return true;
            if (std::find(path.begin(), path.end(), w) != path.end()) continue;
            path.push_back(w);
            if (walk(w)) return true;
            path.pop_back();
        }
        return false;
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        if (walk(s)) return true;
    }
    return false;
}

namespace {

bool is_descendant_in(const Matrix& adj, int v, const std::vector<int>& z) {
    // v or any descendant of v in z
    const int n = static_cast<int>(adj.size());
    std::vector<int> stack{v};
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (seen[u]) continue;
        seen[u] = 1;
        if (std::find(z.begin(), z.end(), u) != z.end()) return true;
        for (int w = 0; w < n; ++w)
            if (adj[u][w]) stack.push_back(w);
    }
    return false;
}

}  // namespace

bool d_separated_paths(const Matrix& adj, int x, int y, const std::vector<int>& z) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> path{x};
    std::function<bool(int)> active_path = [&](int v) {
        for (int w = 0; w < n; ++w) {
            if (!(adj[v][w] || adj[w][v])) continue;
            if (std::find(path.begin(), path.end(), w) != path.end()) continue;
            path.push_back(w);
            if (w == y) {
                bool active = true;
                for (std::size_t i = 1; i + 1 < path.size() && active; ++i) {
                    int a = path[i - 1], b = path[i], c = path[i + 1];
                    bool collider = adj[a][b] && adj[c][b];
                    if (collider)
                        active = is_descendant_in(adj, b, z);
                    else
                        active = std::find(z.begin(), z.end(), b) == z.end();
                }
                if (active) return true;
            } else if (active_path(w)) {
                return true;
            }
            path.pop_back();
        }
        return false;
    };
    return !active_path(x);
}

std::vector<Matrix> all_dags(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<Matrix> out;
    long total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
    for (long code = 0; code < total; ++code) {
        Matrix m(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
        long c = code;
        for (auto [i, j] : pairs) {
            int state = static_cast<int>(c % 3);
            c /= 3;
            if (state == 1) m[i][j] = 1;
            if (state == 2) m[j][i] = 1;
        }
        if (!has_cycle(m)) out.push_back(std::move(m));
    }
    return out;
}

namespace {

bool same_skeleton_and_colliders(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((a[i][j] || a[j][i]) != (b[i][j] || b[j][i])) return false;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            for (int z = x + 1; z < n; ++z) {
                if (x == y || z == y || a[x][z] || a[z][x]) continue;
                bool ca = a[x][y] && a[z][y];
                bool cb = b[x][y] && b[z][y];
                if (ca != cb) return false;
            }
    return true;
}

}  // namespace

std::vector<Matrix> markov_class(const Matrix& dag) {
    static std::map<int, std::vector<Matrix>> cache;
    const int n = static_cast<int>(dag.size());
    if (!cache.count(n)) cache[n] = all_dags(n);
    std::vector<Matrix> out;
    for (auto& m : cache[n])
        if (same_skeleton_and_colliders(dag, m)) out.push_back(m);
    return out;
}

MixedGraph cpdag_from_class(const std::vector<std::string>& names, const std::vector<Matrix>& members) {
    MixedGraph g(names);
    const int n = static_cast<int>(names.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& first = members.front();
            if (!(first[i][j] || first[j][i])) continue;
            bool all_ij = true, all_ji = true;
            for (const auto& m : members) {
                all_ij = all_ij && m[i][j];
                all_ji = all_ji && m[j][i];
            }
            if (all_ij)
                g.add_directed(i, j);
            else if (all_ji)
                g.add_directed(j, i);
            else
                g.add_undirected(i, j);
        }
    return g;
}

double joint(const bnbench::DiscreteBN& bn, const std::vector<int>& assignment) {
    double p = 1.0;
    for (int v = 0; v < bn.num_nodes(); ++v) {
        const auto& cpt = bn.cpt(v);
        int row = 0;
        for (std::size_t i = 0; i < cpt.parents.size(); ++i) row = row * cpt.parent_arities[i] + assignment[cpt.parents[i]];
        p *= cpt.table[static_cast<std::size_t>(row) * cpt.arity + assignment[v]];
    }
    return p;
}

std::vector<double> brute_posterior(const bnbench::DiscreteBN& bn, int target, const std::vector<int>& evidence) {
    const int n = bn.num_nodes();
    const auto arities = bn.arities();
    std::vector<double> out(static_cast<std::size_t>(arities[target]), 0.0);
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    for (;;) {
        bool consistent = true;
        for (int v = 0; v < n; ++v)
            if (evidence[v] >= 0 && evidence[v] != a[v]) consistent = false;
        if (consistent) out[a[target]] += joint(bn, a);
        int i = 0;
        while (i < n && ++a[i] == arities[i]) a[i++] = 0;
        if (i == n) break;
    }
    double z = 0.0;
    for (double v : out) z += v;
    for (double& v : out) v /= z;
    return out;
}

bnbench::DiscreteBN random_bn(const MixedGraph& dag, const std::vector<int>& arities, std::mt19937_64& rng) {
    std::vector<bnbench::Variable> vars;
    for (int v = 0; v < dag.num_nodes(); ++v) {
        bnbench::Variable var{dag.name(v), {}};
        for (int s = 0; s < arities[v]; ++s) var.states.push_back("s" + std::to_string(s));
        vars.push_back(var);
    }
    std::exponential_distribution<double> e(1.0);
    std::vector<bnbench::CPT> cpts;
    for (int v = 0; v < dag.num_nodes(); ++v) {
        bnbench::CPT cpt;
        cpt.node = v;
        cpt.parents = dag.parents(v);
        int q = 1;
        for (int p : cpt.parents) {
            cpt.parent_arities.push_back(arities[p]);
            q *= arities[p];
        }
        cpt.arity = arities[v];
        for (int r = 0; r < q; ++r) {
            std::vector<double> row(static_cast<std::size_t>(cpt.arity));
            double sum = 0.0;
            for (double& x : row) sum += x = e(rng);
            for (double x : row) cpt.table.push_back(x / sum);
        }
        cpts.push_back(std::move(cpt));
    }
    return bnbench::DiscreteBN(dag, vars, cpts);
}

double weighted_l1(const bnbench::DiscreteBN& a, const bnbench::DiscreteBN& b, const bnbench::Dataset& d) {
    double worst = 0.0;
    for (int v = 0; v < a.num_nodes(); ++v) {
        const bnbench::CPT& x = a.cpt(v);
        const bnbench::CPT& y = b.cpt(v);
        std::vector<double> weight(static_cast<std::size_t>(x.num_rows()), 0.0);
        int seen = 0;
        for (int r = 0; r < d.num_rows(); ++r) {
            int row = x.row_index(d.row(r));
            if (row < 0) continue;
            weight[static_cast<std::size_t>(row)] += 1.0;
            ++seen;
        }
        double total = 0.0;
        for (int r = 0; r < x.num_rows(); ++r) {
            double l1 = 0.0;
            for (int s = 0; s < x.arity; ++s) l1 += std::abs(x.at(r, s) - y.at(r, s));
            total += weight[static_cast<std::size_t>(r)] / seen * l1;
        }
        worst = std::max(worst, total);
    }
    return worst;
}

}  // namespace oracle
