#include <cmath>
#include <limits>
#include <random>

#include "bnbench/model.hpp"
#include "model_internal.hpp"

namespace bnbench {

int CPT::row_index(std::span<const int> assignment) const {
    int row = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        int s = assignment[parents[i]];
        if (s == kMissing) return -1;
        row = row * parent_arities[i] + s;
    }
    return row;
}

DiscreteBN::DiscreteBN(MixedGraph dag, std::vector<Variable> variables, std::vector<CPT> cpts)
    : graph_(std::move(dag)), variables_(std::move(variables)), cpts_(std::move(cpts)) {
    const int n = graph_.num_nodes();
    if (static_cast<int>(variables_.size()) != n || static_cast<int>(cpts_.size()) != n)
        throw ModelError("BN needs one variable and one CPT per node");
    order_ = topological_order(graph_);  // throws on cycles and non-directed edges
    for (NodeId v = 0; v < n; ++v) {
        const CPT& c = cpts_[v];
        if (variables_[v].name != graph_.name(v)) throw ModelError("variable order does not match graph nodes");
        if (c.node != v) throw ModelError("CPT node index mismatch for " + graph_.name(v));
        if (c.parents != graph_.parents(v)) throw ModelError("CPT parents do not match graph for " + graph_.name(v));
        if (c.arity != variables_[v].arity()) throw ModelError("CPT arity mismatch for " + graph_.name(v));
        std::size_t q = 1;
        for (std::size_t i = 0; i < c.parents.size(); ++i) {
            if (c.parent_arities[i] != variables_[c.parents[i]].arity())
                throw ModelError("parent arity mismatch in CPT of " + graph_.name(v));
            q *= static_cast<std::size_t>(c.parent_arities[i]);
        }
        if (c.table.size() != q * static_cast<std::size_t>(c.arity))
            throw ModelError("CPT size mismatch for " + graph_.name(v));
        for (std::size_t r = 0; r < q; ++r) {
            double sum = 0.0;
            for (int k = 0; k < c.arity; ++k) {
                double p = c.table[r * c.arity + k];
                if (!(p >= 0.0)) throw ModelError("negative or NaN probability in CPT of " + graph_.name(v));
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw ModelError("CPT row does not sum to 1 for " + graph_.name(v));
        }
    }
}

std::vector<int> DiscreteBN::arities() const {
    std::vector<int> out;
    for (const auto& v : variables_) out.push_back(v.arity());
    return out;
}

double DiscreteBN::log_probability(std::span<const int> assignment) const {
    double total = 0.0;
    for (const auto& c : cpts_) {
        double p = c.at(c.row_index(assignment), assignment[c.node]);
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        total += std::log(p);
    }
    return total;
}

std::vector<CPT> uniform_cpts(const MixedGraph& dag, const std::vector<int>& arities) {
    std::vector<CPT> out;
    for (NodeId v = 0; v < dag.num_nodes(); ++v) {
        CPT c;
        c.node = v;
        c.parents = dag.parents(v);
        c.arity = arities[v];
        std::size_t q = 1;
        for (NodeId p : c.parents) {
            c.parent_arities.push_back(arities[p]);
            q *= static_cast<std::size_t>(arities[p]);
        }
        c.table.assign(q * static_cast<std::size_t>(c.arity), 1.0 / c.arity);
        out.push_back(std::move(c));
    }
    return out;
}

namespace detail {

std::vector<int> columns_for(const std::vector<std::string>& names, const Dataset& d) {
    std::vector<int> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        int c = d.column_index(name);
        if (c < 0) throw ModelError("dataset has no column named " + name);
        cols.push_back(c);
    }
    return cols;
}

Assignment row_assignment(const Dataset& d, int row, const std::vector<int>& cols) {
    Assignment a(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) a[i] = d.at(row, cols[i]);
    return a;
}

int normalize_rows(CPT& c, std::span<const double> counts, double pseudocount) {
    int uniform = 0;
    for (int r = 0; r < c.num_rows(); ++r) {
        double total = 0.0;
        for (int k = 0; k < c.arity; ++k) total += counts[static_cast<std::size_t>(r) * c.arity + k] + pseudocount;
        if (total <= 0.0) {
            ++uniform;
            for (int k = 0; k < c.arity; ++k) c.at(r, k) = 1.0 / c.arity;
            continue;
        }
        for (int k = 0; k < c.arity; ++k)
            c.at(r, k) = (counts[static_cast<std::size_t>(r) * c.arity + k] + pseudocount) / total;
    }
    return uniform;
}

}  // namespace detail

MleFit mle_fit(const MixedGraph& dag, const Dataset& d, double pseudocount) {
    if (pseudocount < 0.0) throw ModelError("pseudocount must be non-negative");
    const auto cols = detail::columns_for(dag.names(), d);
    std::vector<Variable> vars;
    std::vector<int> arities;
    for (int c : cols) {
        vars.push_back(d.variable(c));
        arities.push_back(d.arity(c));
    }
    auto cpts = uniform_cpts(dag, arities);
    MleFit fit;
    for (auto& c : cpts) {
        std::vector<double> tally(c.table.size(), 0.0);
        for (int r = 0; r < d.num_rows(); ++r) {
            int s = d.at(r, cols[c.node]);
            if (s == kMissing) continue;
            int row = 0;
            bool skip = false;
            for (std::size_t i = 0; i < c.parents.size(); ++i) {
                int ps = d.at(r, cols[c.parents[i]]);
                if (ps == kMissing) {
                    skip = true;
                    break;
                }
                row = row * c.parent_arities[i] + ps;
            }
            if (!skip) tally[static_cast<std::size_t>(row) * c.arity + s] += 1.0;
        }
        fit.uniform_rows += detail::normalize_rows(c, tally, pseudocount);
    }
    fit.bn = DiscreteBN(dag, std::move(vars), std::move(cpts));
    return fit;
}

Dataset forward_sample(const DiscreteBN& bn, int n, std::uint64_t seed) {
    if (n < 1) throw ModelError("forward_sample needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int m = bn.num_nodes();
    std::vector<int> cells(static_cast<std::size_t>(n) * m);
    Assignment a(static_cast<std::size_t>(m), kMissing);
    for (int r = 0; r < n; ++r) {
        for (NodeId v : bn.topological()) {
            const CPT& c = bn.cpt(v);
            auto probs = c.row(c.row_index(a));
            double u = unit(rng);
            int state = c.arity - 1;
            double cumulative = 0.0;
            for (int k = 0; k < c.arity; ++k) {
                cumulative += probs[k];
                if (u < cumulative) {
                    state = k;
                    break;
                }
            }
            // Guard against rounding in the cumulative sum landing on a zero entry.
            while (probs[state] <= 0.0 && state > 0) --state;
            a[v] = state;
        }
        std::copy(a.begin(), a.end(), cells.begin() + static_cast<long>(r) * m);
    }
    return Dataset(bn.variables(), std::move(cells));
}

LogLikelihood loglik(const DiscreteBN& bn, const Dataset& d) {
    const auto cols = detail::columns_for(bn.graph().names(), d);
    LogLikelihood out;
    for (int r = 0; r < d.num_rows(); ++r) {
        auto a = detail::row_assignment(d, r, cols);
        for (const auto& c : bn.cpts()) {
            int row = c.row_index(a);
            if (row < 0 || a[c.node] == kMissing) throw ModelError("loglik requires complete data");
            double p = c.at(row, a[c.node]);
            if (p <= 0.0) {
                ++out.zero_probability_cells;
                out.value = -std::numeric_limits<double>::infinity();
            } else if (std::isfinite(out.value)) {
                out.value += std::log(p);
            }
        }
    }
    return out;
}

}  // namespace bnbench
