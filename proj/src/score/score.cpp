#include "bnbench/score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "bnbench/indtest.hpp"

namespace bnbench {
namespace {

constexpr std::int64_t kParamLimit = std::int64_t{1} << 62;

// Counts N_jk over observed parent configurations j (complete rows only).
// Rows of the result are parent configurations in first-seen order.
struct FamilyCounts {
    std::vector<std::vector<double>> rows;
    double q = 1.0;  // number of parent configurations (may exceed the observed ones)
    int k = 0;
    double n = 0.0;
};

FamilyCounts family_counts(const Dataset& d, int node, std::span<const int> parents) {
    FamilyCounts fc;
    fc.k = d.arity(node);
    std::uint64_t q = 1;
    for (int p : parents) {
        if (p == node) throw std::invalid_argument("node cannot be its own parent");
        if (q > static_cast<std::uint64_t>(kParamLimit) / static_cast<std::uint64_t>(d.arity(p)))
            throw std::overflow_error("parent configuration space too large");
        q *= static_cast<std::uint64_t>(d.arity(p));
    }
    fc.q = static_cast<double>(q);

    const bool dense = q <= static_cast<std::uint64_t>(d.num_rows()) * 4 + 64;
    std::vector<int> dense_slot;
    if (dense) dense_slot.assign(static_cast<std::size_t>(q), -1);
    std::unordered_map<std::uint64_t, int> sparse_slot;
    for (int r = 0; r < d.num_rows(); ++r) {
        int s = d.at(r, node);
        if (s == kMissing) continue;
        std::uint64_t key = 0;
        bool skip = false;
        for (int p : parents) {
            int ps = d.at(r, p);
            if (ps == kMissing) {
                skip = true;
                break;
            }
            key = key * static_cast<std::uint64_t>(d.arity(p)) + static_cast<std::uint64_t>(ps);
        }
        if (skip) continue;
        int slot;
        if (dense) {
            int& ref = dense_slot[key];
            if (ref < 0) {
                ref = static_cast<int>(fc.rows.size());
                fc.rows.emplace_back(static_cast<std::size_t>(fc.k), 0.0);
            }
            slot = ref;
        } else {
            auto [it, inserted] = sparse_slot.try_emplace(key, static_cast<int>(fc.rows.size()));
            if (inserted) fc.rows.emplace_back(static_cast<std::size_t>(fc.k), 0.0);
            slot = it->second;
        }
        fc.rows[static_cast<std::size_t>(slot)][static_cast<std::size_t>(s)] += 1.0;
        fc.n += 1.0;
    }
    return fc;
}

}  // namespace

std::int64_t free_parameters(const MixedGraph& dag, std::span<const int> arities) {
    if (static_cast<int>(arities.size()) != dag.num_nodes()) throw std::invalid_argument("arity count mismatch");
    if (!is_acyclic(dag)) throw GraphError("free_parameters requires a DAG");
    std::int64_t total = 0;
    for (NodeId v = 0; v < dag.num_nodes(); ++v) {
        std::int64_t term = arities[v] - 1;
        for (NodeId p : dag.parents(v)) {
            if (term > kParamLimit / arities[p]) throw std::overflow_error("free parameter count exceeds 2^62");
            term *= arities[p];
        }
        if (total > kParamLimit - term) throw std::overflow_error("free parameter count exceeds 2^62");
        total += term;
    }
    return total;
}

std::int64_t degrees_of_freedom(std::int64_t m, std::int64_t f) {
    if (m < 1) throw std::invalid_argument("degrees_of_freedom needs m >= 1");
    return m * (m - 1) / 2 - f;
}

Chi2Deviance chi2_deviance(const DiscreteBN& bn, const Dataset& d) {
    std::vector<int> cols;
    for (const auto& name : bn.graph().names()) {
        int c = d.column_index(name);
        if (c < 0) throw ModelError("dataset has no column named " + name);
        cols.push_back(c);
    }
    std::map<Assignment, std::int64_t> cells;
    for (int r = 0; r < d.num_rows(); ++r) {
        Assignment a(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) {
            a[i] = d.at(r, cols[i]);
            if (a[i] == kMissing) throw ModelError("chi2_deviance requires complete data");
        }
        ++cells[a];
    }
    const double n = d.num_rows();
    Chi2Deviance out;
    for (const auto& [cell, count] : cells) {
        double expected = n * std::exp(bn.log_probability(cell));
        if (!(expected >= 1e-12)) {
            ++out.skipped_cells;
            continue;
        }
        double diff = static_cast<double>(count) - expected;
        out.value += diff * diff / expected;
    }
    return out;
}

ModelStats model_stats(const DiscreteBN& bn, const Dataset& d) {
    if (d.num_rows() < 1) throw ModelError("model_stats needs at least one row");
    ModelStats s;
    auto dev = chi2_deviance(bn, d);
    s.chi2 = dev.value;
    s.skipped_cells = dev.skipped_cells;
    s.n = d.num_rows();
    auto arities = bn.arities();
    s.df = degrees_of_freedom(bn.num_nodes(), free_parameters(bn.graph(), arities));
    s.df_negative = s.df < 0;
    s.p_value = s.df <= 0 ? 1.0 : chi_square_upper_tail(s.chi2, static_cast<double>(s.df));
    s.bic = s.chi2 - static_cast<double>(s.df) * std::log(static_cast<double>(s.n));
    return s;
}

double bdeu_local(const Dataset& d, int node, std::span<const int> parents, const LocalScoreParams& p) {
    if (!(p.sample_prior > 0.0) || !(p.structure_prior > 0.0)) throw std::invalid_argument("priors must be positive");
    auto fc = family_counts(d, node, parents);
    const double alpha_j = p.sample_prior / fc.q;
    const double alpha_jk = alpha_j / fc.k;
    double score = 0.0;
    const double lg_alpha_j = std::lgamma(alpha_j);
    const double lg_alpha_jk = std::lgamma(alpha_jk);
    for (const auto& row : fc.rows) {
        double nj = 0.0;
        for (double c : row) {
            nj += c;
            if (c > 0.0) score += std::lgamma(alpha_jk + c) - lg_alpha_jk;
        }
        score += lg_alpha_j - std::lgamma(alpha_j + nj);
    }
    if (p.structure_prior != 1.0 && d.num_columns() > 1)
        score += static_cast<double>(parents.size()) * std::log(p.structure_prior / (d.num_columns() - 1));
    return score;
}

double bic_local(const Dataset& d, int node, std::span<const int> parents, const LocalScoreParams& p) {
    if (!(p.penalty_discount > 0.0)) throw std::invalid_argument("penalty discount must be positive");
    auto fc = family_counts(d, node, parents);
    if (fc.n <= 0.0) return 0.0;
    double ll = 0.0;
    for (const auto& row : fc.rows) {
        double nj = 0.0;
        for (double c : row) nj += c;
        for (double c : row)
            if (c > 0.0) ll += c * std::log(c / nj);
    }
    const double params = (fc.k - 1) * fc.q;
    return ll - p.penalty_discount * (params / 2.0) * std::log(fc.n);
}

double LocalScore::local(int node, std::span<const int> parents) {
    std::vector<int> key(parents.begin(), parents.end());
    key.push_back(node);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    double value = compute(node, parents);
    cache_.emplace(std::move(key), value);
    return value;
}

double LocalScore::total(const MixedGraph& dag) {
    if (dag.names() != names()) throw std::invalid_argument("graph nodes do not match score variables");
    double sum = 0.0;
    for (NodeId v = 0; v < dag.num_nodes(); ++v) sum += local(v, dag.parents(v));
    return sum;
}

DataLocalScore::DataLocalScore(const Dataset& d, ScoreKind kind, LocalScoreParams params)
    : data_(d), names_(d.names()), kind_(kind), params_(params) {}

double DataLocalScore::compute(int node, std::span<const int> parents) {
    return kind_ == ScoreKind::BDeu ? bdeu_local(data_, node, parents, params_)
                                    : bic_local(data_, node, parents, params_);
}

MeanBdeuScore::MeanBdeuScore(const std::vector<Dataset>& datasets, LocalScoreParams params)
    : datasets_(datasets), params_(params) {
    if (datasets_.empty()) throw std::invalid_argument("at least one dataset is required");
    names_ = datasets_.front().names();
    for (const auto& d : datasets_)
        if (d.variables() != datasets_.front().variables())
            throw std::invalid_argument("datasets do not share variable definitions");
}

double MeanBdeuScore::compute(int node, std::span<const int> parents) {
    double sum = 0.0;
    for (const auto& d : datasets_) sum += bdeu_local(d, node, parents, params_);
    return sum / static_cast<double>(datasets_.size());
}

}  // namespace bnbench
