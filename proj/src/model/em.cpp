#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "bnbench/model.hpp"
#include "model_internal.hpp"

namespace bnbench {
namespace {

std::vector<CPT> jittered_cpts(const MixedGraph& dag, const std::vector<int>& arities, const EmOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto cpts = uniform_cpts(dag, arities);
    for (auto& c : cpts) {
        for (int r = 0; r < c.num_rows(); ++r) {
            double total = 0.0;
            for (int k = 0; k < c.arity; ++k) {
                c.at(r, k) = 1.0 + options.jitter * unit(rng);
                total += c.at(r, k);
            }
            for (int k = 0; k < c.arity; ++k) c.at(r, k) /= total;
        }
    }
    return cpts;
}

double max_change(const std::vector<CPT>& a, const std::vector<CPT>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].table.size(); ++j)
            worst = std::max(worst, std::abs(a[i].table[j] - b[i].table[j]));
    return worst;
}

}  // namespace

EmFit em_fit(const MixedGraph& dag, const Dataset& d, const EmOptions& options) {
    if (options.max_iterations < 1) throw ModelError("EM needs at least one iteration");
    const auto cols = detail::columns_for(dag.names(), d);
    const int n = dag.num_nodes();
    std::vector<Variable> vars;
    std::vector<int> arities;
    for (int c : cols) {
        vars.push_back(d.variable(c));
        arities.push_back(d.arity(c));
    }

    // Identical records share one E-step computation.
    std::map<Assignment, double> records;
    std::vector<bool> observed(static_cast<std::size_t>(n), false);
    bool complete = true;
    for (int r = 0; r < d.num_rows(); ++r) {
        auto a = detail::row_assignment(d, r, cols);
        for (NodeId v = 0; v < n; ++v) {
            if (a[v] == kMissing)
                complete = false;
            else
                observed[v] = true;
        }
        records[a] += 1.0;
    }

    EmFit fit;
    for (NodeId v = 0; v < n; ++v)
        if (!observed[v]) fit.unobserved_columns.push_back(dag.name(v));

    std::vector<CPT> current = jittered_cpts(dag, arities, options);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        DiscreteBN bn(dag, vars, current);
        std::vector<std::vector<double>> expected(current.size());
        for (std::size_t i = 0; i < current.size(); ++i) expected[i].assign(current[i].table.size(), 0.0);

        double ll = 0.0;
        for (const auto& [record, weight] : records) {
            if (!complete) ll += weight * log_evidence(bn, record);
            for (const CPT& c : current) {
                std::vector<NodeId> family = c.parents;
                family.push_back(c.node);
                std::vector<NodeId> hidden;
                for (NodeId v : family)
                    if (record[v] == kMissing) hidden.push_back(v);
                auto& tally = expected[c.node];
                if (hidden.empty()) {
                    tally[static_cast<std::size_t>(c.row_index(record)) * c.arity + record[c.node]] += weight;
                    continue;
                }
                auto post = posterior_joint(bn, hidden, record);
                Assignment a = record;
                std::vector<int> states(hidden.size(), 0);
                for (double p : post) {
                    for (std::size_t i = 0; i < hidden.size(); ++i) a[hidden[i]] = states[i];
                    tally[static_cast<std::size_t>(c.row_index(a)) * c.arity + a[c.node]] += weight * p;
                    for (std::size_t i = hidden.size(); i-- > 0;) {
                        if (++states[i] < arities[hidden[i]]) break;
                        states[i] = 0;
                    }
                }
            }
        }

        std::vector<CPT> next = current;
        for (std::size_t i = 0; i < next.size(); ++i) detail::normalize_rows(next[i], expected[i], 0.0);
        fit.iterations = iter;

        if (complete) {
            // The E-step does not depend on the parameters: one update is the fixpoint.
            current = std::move(next);
            fit.converged = true;
            break;
        }
        fit.loglik_trace.push_back(ll);
        double change = max_change(current, next);
        current = std::move(next);
        if (change < options.tolerance) {
            fit.converged = true;
            break;
        }
    }

    fit.bn = DiscreteBN(dag, std::move(vars), std::move(current));
    double final_ll = 0.0;
    for (const auto& [record, weight] : records) final_ll += weight * log_evidence(fit.bn, record);
    fit.loglik_trace.push_back(final_ll);
    for (std::size_t i = 1; i < fit.loglik_trace.size(); ++i) {
        double prev = fit.loglik_trace[i - 1];
        if (fit.loglik_trace[i] < prev - 1e-9 * (1.0 + std::abs(prev))) fit.monotone = false;
    }
    return fit;
}

}  // namespace bnbench
