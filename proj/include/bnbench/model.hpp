#ifndef BNBENCH_MODEL_HPP
#define BNBENCH_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bnbench/data.hpp"
#include "bnbench/graph.hpp"

namespace bnbench {

/// Conditional probability table; rows are parent configurations in
/// row-major order over `parents` (first parent slowest), columns are states.
struct CPT {
    NodeId node = 0;
    std::vector<NodeId> parents;
    std::vector<int> parent_arities;
    int arity = 0;
    std::vector<double> table;

    int num_rows() const { return static_cast<int>(table.size()) / arity; }
    double& at(int row, int state) { return table[static_cast<std::size_t>(row) * arity + state]; }
    double at(int row, int state) const { return table[static_cast<std::size_t>(row) * arity + state]; }
    std::span<const double> row(int r) const { return {table.data() + static_cast<std::size_t>(r) * arity, static_cast<std::size_t>(arity)}; }
    /// Row index for a full assignment indexed by node; -1 if a parent is missing.
    int row_index(std::span<const int> assignment) const;

    bool operator==(const CPT&) const = default;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroProbabilityEvidence : public ModelError {
public:
    using ModelError::ModelError;
};

/// DAG plus one CPT per node. Immutable once built.
class DiscreteBN {
public:
    DiscreteBN() = default;
    DiscreteBN(MixedGraph dag, std::vector<Variable> variables, std::vector<CPT> cpts);

    int num_nodes() const { return graph_.num_nodes(); }
    const MixedGraph& graph() const { return graph_; }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(NodeId v) const { return variables_.at(static_cast<std::size_t>(v)); }
    const CPT& cpt(NodeId v) const { return cpts_.at(static_cast<std::size_t>(v)); }
    const std::vector<CPT>& cpts() const { return cpts_; }
    const std::vector<NodeId>& topological() const { return order_; }
    std::vector<int> arities() const;

    /// ln P(x) of a complete assignment; -inf when some factor is zero.
    double log_probability(std::span<const int> assignment) const;

    bool operator==(const DiscreteBN& other) const = default;

private:
    MixedGraph graph_;
    std::vector<Variable> variables_;
    std::vector<CPT> cpts_;
    std::vector<NodeId> order_;
};

/// Uniform CPTs over the DAG's parents.
std::vector<CPT> uniform_cpts(const MixedGraph& dag, const std::vector<int>& arities);

struct MleFit {
    DiscreteBN bn;
    /// Parent configurations without data that fell back to a uniform row.
    int uniform_rows = 0;
};

/// Nodes of `dag` are matched to dataset columns by name.
MleFit mle_fit(const MixedGraph& dag, const Dataset& d, double pseudocount = 0.0);

struct EmOptions {
    double tolerance = 1e-4;
    int max_iterations = 200;
    std::uint64_t seed = 1;
    double jitter = 0.01;
};

struct EmFit {
    DiscreteBN bn;
    int iterations = 0;
    bool converged = false;
    /// Observed-data log-likelihood after each iteration.
    std::vector<double> loglik_trace;
    bool monotone = true;
    /// Columns with no observed value; their CPTs stay at the EM fixpoint.
    std::vector<std::string> unobserved_columns;
};

/// EM under missing-at-random: exact expected sufficient statistics per
/// record, M-step renormalization, stop on max CPT change < tolerance.
EmFit em_fit(const MixedGraph& dag, const Dataset& d, const EmOptions& options = {});

/// Evidence indexed by node; kMissing entries are unobserved.
using Assignment = std::vector<int>;

/// P(target | evidence) by variable elimination with a min-degree order.
std::vector<double> eliminate(const DiscreteBN& bn, NodeId target, std::span<const int> evidence);

/// Same query with an explicit elimination order over the hidden nodes;
/// nodes not listed are eliminated afterwards in index order.
std::vector<double> eliminate_with_order(const DiscreteBN& bn, NodeId target, std::span<const int> evidence,
                                         std::span<const NodeId> order);

/// Joint posterior over `query` (row-major, first query node slowest).
std::vector<double> posterior_joint(const DiscreteBN& bn, std::span<const NodeId> query, std::span<const int> evidence);

/// ln P(evidence).
double log_evidence(const DiscreteBN& bn, std::span<const int> evidence);

struct RowPrediction {
    std::vector<double> posterior;
    int predicted = -1;
    int label = kMissing;
    bool excluded = false;
};

/// Full-evidence, in-sample prediction of `target` for each row. Dataset
/// columns are matched to BN variables by name; missing cells are left out of
/// the evidence. Rows with impossible evidence are flagged excluded.
std::vector<RowPrediction> predict(const DiscreteBN& bn, const Dataset& d, const std::string& target);

/// Ancestral sampling; columns follow node order.
Dataset forward_sample(const DiscreteBN& bn, int n, std::uint64_t seed);

struct LogLikelihood {
    double value = 0.0;
    std::int64_t zero_probability_cells = 0;
};

LogLikelihood loglik(const DiscreteBN& bn, const Dataset& d);

// Serialization: graph text, a "Variable States:" block with one
// `<name>: s0;s1;...` line per node, then per node `CPT <name> | <p1;p2>`
// followed by q lines of k probabilities (17 significant digits).
void write_bn(std::ostream& out, const DiscreteBN& bn);
std::string bn_to_string(const DiscreteBN& bn);
void save_bn(const std::filesystem::path& path, const DiscreteBN& bn);
DiscreteBN read_bn(std::istream& in);
DiscreteBN load_bn(const std::filesystem::path& path);

}  // namespace bnbench

#endif  // BNBENCH_MODEL_HPP
