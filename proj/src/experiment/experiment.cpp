#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bnbench/experiment.hpp"
#include "bnbench/graph_io.hpp"
#include "bnbench/orientation.hpp"

namespace bnbench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Reference graph over the dataset's columns, in column order. Reference
// nodes without a column are dropped; columns without a node stay isolated.
MixedGraph align_reference(const MixedGraph& reference, const Dataset& d) {
    MixedGraph out(d.names());
    for (const auto& e : reference.edges()) {
        NodeId a = out.index_of(reference.name(e.a));
        NodeId b = out.index_of(reference.name(e.b));
        if (a >= 0 && b >= 0) out.add_edge(a, e.mark_a, b, e.mark_b);
    }
    return out;
}

MixedGraph as_dag(const MixedGraph& g, std::uint64_t seed) {
    if (g.only_directed() && is_acyclic(g)) return g;
    return randomize_orientation(g, seed).dag;
}

struct Inputs {
    const Dataset& raw;
    const Dataset& imputed;
    MissingPolicy policy;
    const ExperimentConfig& cfg;
};

void fit_and_score(ReportRow& row, const MixedGraph& dag, const MixedGraph* reference_dag, const Inputs& in) {
    DiscreteBN bn;
    const Dataset* eval_data = &in.imputed;
    Dataset complete;
    if (in.policy == MissingPolicy::ImputeStateMle) {
        bn = mle_fit(dag, in.imputed).bn;
        row.stats = model_stats(bn, in.imputed);
    } else {
        if (in.raw.has_missing()) {
            EmOptions opts = in.cfg.em;
            opts.seed = in.cfg.seed;
            bn = em_fit(dag, in.raw, opts).bn;
        } else {
            bn = mle_fit(dag, in.raw).bn;
        }
        eval_data = &in.raw;
        complete = in.raw.complete_rows();
        if (complete.num_rows() == 0) throw ModelError("no complete rows to compute model statistics");
        row.stats = model_stats(bn, complete);
    }
    if (reference_dag != nullptr) {
        row.arcs = arc_comparison(dag, *reference_dag);
        row.ddm = row.arcs->t > 0 ? ddm(*row.arcs) : kNaN;
    }
    for (const auto& t : in.cfg.targets) row.targets.push_back(prediction_report(bn, *eval_data, t.name));
}

}  // namespace

PredictionReport prediction_report(const DiscreteBN& bn, const Dataset& d, const std::string& target) {
    if (d.column_index(target) < 0) throw DataError("unknown target variable: " + target);
    PredictionReport rep;
    rep.target = target;
    std::vector<std::vector<double>> posteriors;
    std::vector<int> labels;
    std::vector<int> predicted;
    for (const auto& p : predict(bn, d, target)) {
        if (p.excluded || p.label == kMissing) {
            ++rep.excluded_rows;
            continue;
        }
        posteriors.push_back(p.posterior);
        labels.push_back(p.label);
        predicted.push_back(p.predicted);
    }
    if (labels.empty()) {
        rep.summary_auc = kNaN;
        rep.cc = kNaN;
        return rep;
    }
    auto auc = auc_ovr(posteriors, labels);
    rep.per_state_auc = auc.per_state;
    rep.summary_auc = auc.summary;
    rep.cc = cc(predicted, labels);
    return rep;
}

std::vector<ReportRow> run_test(const std::string& test, const Dataset& d, const MixedGraph* reference,
                                MissingPolicy policy, const ExperimentConfig& cfg) {
    const Dataset imputed = policy == MissingPolicy::ImputeStateMle ? impute_missing_state(d) : d;
    const Dataset& learn_data = policy == MissingPolicy::ImputeStateMle ? imputed : d;
    Inputs in{d, imputed, policy, cfg};
    std::vector<ReportRow> rows;

    std::optional<MixedGraph> reference_dag;
    if (reference != nullptr) {
        ReportRow row{test, "KBG", {}, {}, 0.0, {}, {}};
        try {
            reference_dag = as_dag(align_reference(*reference, d), cfg.seed);
            fit_and_score(row, *reference_dag, &*reference_dag, in);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    const MixedGraph* ref = reference_dag ? &*reference_dag : nullptr;

    for (const auto& alg : cfg.algorithms) {
        ReportRow row{test, alg.label, {}, {}, 0.0, {}, {}};
        try {
            MixedGraph learned = learn_by_name(alg.name, learn_data, alg.options);
            MixedGraph dag = as_dag(learned, cfg.seed);
            fit_and_score(row, dag, ref, in);
        } catch (const std::exception& e) {
            row.stats.reset();
            row.arcs.reset();
            row.targets.clear();
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ReportRow> run_synthetic(const DiscreteBN& truth, const ExperimentConfig& cfg) {
    if (cfg.sample_sizes.empty()) throw ConfigError("synthetic mode needs sample_sizes");
    const int largest = *std::max_element(cfg.sample_sizes.begin(), cfg.sample_sizes.end());
    if (largest < 1) throw ConfigError("sample sizes must be positive");
    const Dataset full = forward_sample(truth, largest, cfg.seed);
    std::vector<ReportRow> rows;
    for (int n : cfg.sample_sizes) {
        const Dataset d = full.head(n);
        for (auto policy : cfg.missing_policies) {
            std::string test = "N=" + std::to_string(n);
            if (cfg.missing_policies.size() > 1) test += "/" + policy_name(policy);
            auto part = run_test(test, d, &truth.graph(), policy, cfg);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    }
    return rows;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.synthetic()) return run_synthetic(load_bn(*cfg.ground_truth_bn), cfg);
    std::optional<MixedGraph> reference;
    if (cfg.reference_graph) reference = load_graph(*cfg.reference_graph);
    std::vector<ReportRow> rows;
    for (const auto& path : cfg.data) {
        const Dataset d = load_csv(path, cfg.missing_token);
        for (auto policy : cfg.missing_policies) {
            std::string test = path.stem().string();
            if (cfg.missing_policies.size() > 1) test += "/" + policy_name(policy);
            auto part = run_test(test, d, reference ? &*reference : nullptr, policy, cfg);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    }
    return rows;
}

DiscreteBN gen_ground_truth(const GroundTruthSpec& spec) {
    if (spec.nodes < 1) throw ConfigError("ground truth needs at least one node");
    const long max_arcs = static_cast<long>(spec.nodes) * (spec.nodes - 1) / 2;
    if (spec.arcs < 0 || spec.arcs > max_arcs) throw ConfigError("arc count is infeasible for the node count");
    if (spec.min_arity < 2 || spec.max_arity > kMaxArity || spec.min_arity > spec.max_arity)
        throw ConfigError("arity range must lie within [2, " + std::to_string(kMaxArity) + "]");

    std::mt19937_64 rng(spec.seed);
    std::vector<NodeId> order(static_cast<std::size_t>(spec.nodes));
    for (int i = 0; i < spec.nodes; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < spec.nodes; ++i)
        for (int j = i + 1; j < spec.nodes; ++j) pairs.emplace_back(i, j);
    std::shuffle(pairs.begin(), pairs.end(), rng);

    const int width = spec.nodes < 100 ? 2 : static_cast<int>(std::to_string(spec.nodes).size());
    std::vector<std::string> names;
    for (int i = 1; i <= spec.nodes; ++i) {
        std::string digits = std::to_string(i);
        names.push_back("X" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))), '0') + digits);
    }
    MixedGraph dag(names);
    for (int e = 0; e < spec.arcs; ++e) dag.add_directed(order[pairs[e].first], order[pairs[e].second]);

    std::uniform_int_distribution<int> arity_dist(spec.min_arity, spec.max_arity);
    std::vector<Variable> vars;
    std::vector<int> arities;
    for (int v = 0; v < spec.nodes; ++v) {
        Variable var{names[v], {}};
        int k = arity_dist(rng);
        for (int s = 0; s < k; ++s) var.states.push_back("s" + std::to_string(s));
        arities.push_back(k);
        vars.push_back(std::move(var));
    }
    auto cpts = uniform_cpts(dag, arities);
    std::exponential_distribution<double> unit_exp(1.0);
    for (auto& cpt : cpts)
        for (int r = 0; r < cpt.num_rows(); ++r) {
            double sum = 0.0;
            for (int s = 0; s < cpt.arity; ++s) sum += cpt.at(r, s) = unit_exp(rng);
            for (int s = 0; s < cpt.arity; ++s) cpt.at(r, s) /= sum;
        }
    return DiscreteBN(std::move(dag), std::move(vars), std::move(cpts));
}

}  // namespace bnbench
