#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "bnbench/model.hpp"
#include "model_internal.hpp"

namespace bnbench {
namespace detail {

Factor cpt_factor(const DiscreteBN& bn, NodeId node, std::span<const int> evidence) {
    const CPT& c = bn.cpt(node);
    std::vector<NodeId> family = c.parents;
    family.push_back(node);
    std::sort(family.begin(), family.end());

    Factor f;
    for (NodeId v : family)
        if (evidence[v] == kMissing) {
            f.vars.push_back(v);
            f.cards.push_back(bn.variable(v).arity());
        }
    std::size_t size = 1;
    for (int k : f.cards) size *= static_cast<std::size_t>(k);
    f.values.resize(size);

    Assignment a(evidence.begin(), evidence.end());
    std::vector<int> states(f.vars.size(), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        for (std::size_t i = 0; i < f.vars.size(); ++i) a[f.vars[i]] = states[i];
        f.values[idx] = c.at(c.row_index(a), a[node]);
        for (std::size_t i = f.vars.size(); i-- > 0;) {
            if (++states[i] < f.cards[i]) break;
            states[i] = 0;
        }
    }
    return f;
}

Factor multiply(const Factor& a, const Factor& b) {
    Factor out;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(out.vars));
    const std::size_t k = out.vars.size();
    std::vector<std::size_t> stride_a(k, 0), stride_b(k, 0);
    auto strides = [&](const Factor& f, std::vector<std::size_t>& dst) {
        std::size_t stride = 1;
        for (std::size_t i = f.vars.size(); i-- > 0;) {
            auto pos = static_cast<std::size_t>(std::lower_bound(out.vars.begin(), out.vars.end(), f.vars[i]) -
                                                out.vars.begin());
            dst[pos] = stride;
            stride *= static_cast<std::size_t>(f.cards[i]);
        }
    };
    for (NodeId v : out.vars) {
        auto ia = std::lower_bound(a.vars.begin(), a.vars.end(), v);
        if (ia != a.vars.end() && *ia == v)
            out.cards.push_back(a.cards[static_cast<std::size_t>(ia - a.vars.begin())]);
        else
            out.cards.push_back(b.cards[static_cast<std::size_t>(std::lower_bound(b.vars.begin(), b.vars.end(), v) -
                                                                 b.vars.begin())]);
    }
    strides(a, stride_a);
    strides(b, stride_b);
    std::size_t size = 1;
    for (int c : out.cards) size *= static_cast<std::size_t>(c);
    out.values.resize(size);
    std::vector<int> states(k, 0);
    std::size_t ia = 0, ib = 0;
    for (std::size_t idx = 0; idx < size; ++idx) {
        out.values[idx] = a.values[ia] * b.values[ib];
        for (std::size_t i = k; i-- > 0;) {
            if (++states[i] < out.cards[i]) {
                ia += stride_a[i];
                ib += stride_b[i];
                break;
            }
            ia -= stride_a[i] * static_cast<std::size_t>(out.cards[i] - 1);
            ib -= stride_b[i] * static_cast<std::size_t>(out.cards[i] - 1);
            states[i] = 0;
        }
    }
    return out;
}

Factor sum_out(const Factor& f, NodeId var) {
    auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
    if (it == f.vars.end() || *it != var) return f;
    const auto pos = static_cast<std::size_t>(it - f.vars.begin());
    Factor out;
    out.vars = f.vars;
    out.cards = f.cards;
    out.vars.erase(out.vars.begin() + static_cast<long>(pos));
    out.cards.erase(out.cards.begin() + static_cast<long>(pos));
    std::size_t inner = 1;
    for (std::size_t i = pos + 1; i < f.cards.size(); ++i) inner *= static_cast<std::size_t>(f.cards[i]);
    const auto card = static_cast<std::size_t>(f.cards[pos]);
    const std::size_t outer = f.values.size() / (inner * card);
    out.values.assign(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t c = 0; c < card; ++c)
            for (std::size_t i = 0; i < inner; ++i) out.values[o * inner + i] += f.values[(o * card + c) * inner + i];
    return out;
}

}  // namespace detail

namespace {

using detail::Factor;

std::string describe_evidence(const DiscreteBN& bn, std::span<const int> evidence) {
    std::string out;
    for (NodeId v = 0; v < bn.num_nodes(); ++v) {
        if (evidence[v] == kMissing) continue;
        if (!out.empty()) out += ", ";
        out += bn.graph().name(v) + "=" + bn.variable(v).states.at(static_cast<std::size_t>(evidence[v]));
    }
    return out.empty() ? "(no evidence)" : out;
}

struct VeResult {
    Factor factor;  // over the sorted query nodes, unnormalized
    double log_scale = 0.0;
};

VeResult run_ve(const DiscreteBN& bn, std::vector<NodeId> query, std::span<const int> evidence,
                std::optional<std::span<const NodeId>> order) {
    const int n = bn.num_nodes();
    if (static_cast<int>(evidence.size()) != n) throw ModelError("evidence must have one entry per node");
    for (NodeId v = 0; v < n; ++v)
        if (evidence[v] != kMissing && (evidence[v] < 0 || evidence[v] >= bn.variable(v).arity()))
            throw ModelError("evidence state out of range for " + bn.graph().name(v));
    std::sort(query.begin(), query.end());
    for (NodeId q : query)
        if (evidence[q] != kMissing) throw ModelError("query node " + bn.graph().name(q) + " is observed");

    // Only ancestors of the query and evidence matter; the rest sum to one.
    std::vector<bool> relevant(static_cast<std::size_t>(n), false);
    std::vector<NodeId> stack(query.begin(), query.end());
    for (NodeId v = 0; v < n; ++v)
        if (evidence[v] != kMissing) stack.push_back(v);
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (relevant[v]) continue;
        relevant[v] = true;
        for (NodeId p : bn.cpt(v).parents) stack.push_back(p);
    }

    VeResult res;
    std::vector<Factor> factors;
    auto push = [&](Factor f) {
        if (!f.vars.empty()) {
            factors.push_back(std::move(f));
            return;
        }
        if (f.values[0] <= 0.0)
            throw ZeroProbabilityEvidence("evidence has probability zero: " + describe_evidence(bn, evidence));
        res.log_scale += std::log(f.values[0]);
    };
    for (NodeId v = 0; v < n; ++v)
        if (relevant[v]) push(detail::cpt_factor(bn, v, evidence));

    std::vector<NodeId> hidden;
    for (NodeId v = 0; v < n; ++v)
        if (relevant[v] && evidence[v] == kMissing && !std::binary_search(query.begin(), query.end(), v))
            hidden.push_back(v);

    auto eliminate_var = [&](NodeId var) {
        Factor prod;
        prod.values = {1.0};
        std::vector<Factor> rest;
        for (auto& f : factors) {
            if (std::binary_search(f.vars.begin(), f.vars.end(), var))
                prod = detail::multiply(prod, f);
            else
                rest.push_back(std::move(f));
        }
        factors = std::move(rest);
        push(detail::sum_out(prod, var));
    };

    if (order) {
        std::vector<bool> done(static_cast<std::size_t>(n), false);
        for (NodeId v : *order) {
            if (!std::binary_search(hidden.begin(), hidden.end(), v) || done[v]) continue;
            done[v] = true;
            eliminate_var(v);
        }
        for (NodeId v : hidden)
            if (!done[v]) eliminate_var(v);
    } else {
        std::vector<NodeId> remaining = hidden;
        while (!remaining.empty()) {
            // Min-degree in the current interaction graph; lowest index on ties.
            std::size_t best = 0;
            std::size_t best_degree = std::numeric_limits<std::size_t>::max();
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                std::vector<NodeId> nb;
                for (const auto& f : factors)
                    if (std::binary_search(f.vars.begin(), f.vars.end(), remaining[i]))
                        nb.insert(nb.end(), f.vars.begin(), f.vars.end());
                std::sort(nb.begin(), nb.end());
                nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
                if (nb.size() < best_degree) {
                    best_degree = nb.size();
                    best = i;
                }
            }
            NodeId var = remaining[best];
            remaining.erase(remaining.begin() + static_cast<long>(best));
            eliminate_var(var);
        }
    }

    Factor joint;
    joint.values = {1.0};
    for (const auto& f : factors) joint = detail::multiply(joint, f);
    // Query nodes untouched by any factor cannot occur; each has its own CPT.
    double total = 0.0;
    for (double v : joint.values) total += v;
    if (!(total > 0.0))
        throw ZeroProbabilityEvidence("evidence has probability zero: " + describe_evidence(bn, evidence));
    res.factor = std::move(joint);
    return res;
}

std::vector<double> normalized(const Factor& f) {
    double total = 0.0;
    for (double v : f.values) total += v;
    std::vector<double> out(f.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values[i] / total;
    return out;
}

}  // namespace

std::vector<double> eliminate(const DiscreteBN& bn, NodeId target, std::span<const int> evidence) {
    return normalized(run_ve(bn, {target}, evidence, std::nullopt).factor);
}

std::vector<double> eliminate_with_order(const DiscreteBN& bn, NodeId target, std::span<const int> evidence,
                                         std::span<const NodeId> order) {
    return normalized(run_ve(bn, {target}, evidence, order).factor);
}

std::vector<double> posterior_joint(const DiscreteBN& bn, std::span<const NodeId> query, std::span<const int> evidence) {
    std::vector<NodeId> q(query.begin(), query.end());
    auto res = run_ve(bn, q, evidence, std::nullopt);
    auto sorted_post = normalized(res.factor);
    if (std::is_sorted(q.begin(), q.end())) return sorted_post;

    // Re-lay the sorted-variable table in the caller's order.
    const Factor& f = res.factor;
    std::vector<std::size_t> sorted_stride(f.vars.size());
    std::size_t stride = 1;
    for (std::size_t i = f.vars.size(); i-- > 0;) {
        sorted_stride[i] = stride;
        stride *= static_cast<std::size_t>(f.cards[i]);
    }
    std::vector<std::size_t> stride_of(q.size());
    std::vector<int> card_of(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        auto pos = static_cast<std::size_t>(std::lower_bound(f.vars.begin(), f.vars.end(), q[i]) - f.vars.begin());
        stride_of[i] = sorted_stride[pos];
        card_of[i] = f.cards[pos];
    }
    std::vector<double> out(sorted_post.size());
    std::vector<int> states(q.size(), 0);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < q.size(); ++i) src += stride_of[i] * static_cast<std::size_t>(states[i]);
        out[idx] = sorted_post[src];
        for (std::size_t i = q.size(); i-- > 0;) {
            if (++states[i] < card_of[i]) break;
            states[i] = 0;
        }
    }
    return out;
}

double log_evidence(const DiscreteBN& bn, std::span<const int> evidence) {
    auto res = run_ve(bn, {}, evidence, std::nullopt);
    return res.log_scale + std::log(res.factor.values[0]);
}

std::vector<RowPrediction> predict(const DiscreteBN& bn, const Dataset& d, const std::string& target) {
    const NodeId t = bn.graph().index_of(target);
    if (t < 0) throw ModelError("target " + target + " is not a node of the model");
    const auto cols = detail::columns_for(bn.graph().names(), d);
    for (NodeId v = 0; v < bn.num_nodes(); ++v)
        if (d.variable(cols[v]).states != bn.variable(v).states)
            throw ModelError("state space of column " + bn.graph().name(v) + " differs from the model");

    std::map<Assignment, std::optional<std::vector<double>>> memo;
    std::vector<RowPrediction> out(static_cast<std::size_t>(d.num_rows()));
    for (int r = 0; r < d.num_rows(); ++r) {
        auto evidence = detail::row_assignment(d, r, cols);
        RowPrediction& p = out[r];
        p.label = evidence[t];
        evidence[t] = kMissing;
        auto [it, inserted] = memo.try_emplace(evidence);
        if (inserted) {
            try {
                it->second = eliminate(bn, t, evidence);
            } catch (const ZeroProbabilityEvidence&) {
                it->second.reset();
            }
        }
        if (!it->second) {
            p.excluded = true;
            continue;
        }
        p.posterior = *it->second;
        p.predicted = static_cast<int>(std::max_element(p.posterior.begin(), p.posterior.end()) - p.posterior.begin());
    }
    return out;
}

}  // namespace bnbench
