#ifndef BNBENCH_EXPERIMENT_HPP
#define BNBENCH_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bnbench/eval.hpp"
#include "bnbench/learn.hpp"
#include "bnbench/model.hpp"
#include "bnbench/score.hpp"

namespace bnbench {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MissingPolicy { ImputeStateMle, EmMar };
enum class TargetRole { Primary, Secondary };

std::string policy_name(MissingPolicy p);

struct TargetSpec {
    std::string name;
    TargetRole role = TargetRole::Primary;
};

struct AlgorithmSpec {
    std::string name;
    /// Report label; defaults to `name`.
    std::string label;
    AlgorithmOptions options;
};

struct ExperimentConfig {
    std::vector<std::filesystem::path> data;
    std::optional<std::filesystem::path> reference_graph;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<MissingPolicy> missing_policies{MissingPolicy::ImputeStateMle};
    std::vector<TargetSpec> targets;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<int> sample_sizes;
    std::optional<std::filesystem::path> ground_truth_bn;
    std::string missing_token;
    EmOptions em;

    bool synthetic() const { return ground_truth_bn.has_value(); }
};

/// Parses the JSON document. Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
/// Throws ConfigError when the mode requirements are not met.
void validate_config(const ExperimentConfig& cfg);

struct PredictionReport {
    std::string target;
    /// NaN for states without positive or negative rows.
    std::vector<double> per_state_auc;
    /// NaN when undefined.
    double summary_auc = 0.0;
    /// NaN when no row could be scored.
    double cc = 0.0;
    int excluded_rows = 0;
};

/// Predicts `target` for each row of `d` and scores the predictions.
PredictionReport prediction_report(const DiscreteBN& bn, const Dataset& d, const std::string& target);

struct ReportRow {
    /// Dataset, sample size and policy the row belongs to.
    std::string test;
    std::string algorithm;
    std::optional<ModelStats> stats;
    std::optional<ArcComparison> arcs;
    double ddm = 0.0;
    std::vector<PredictionReport> targets;
    /// Non-empty when the row failed.
    std::string error;
};

/// Learns, orients, fits, scores and predicts for every configured
/// algorithm plus the reference-graph row "KBG".
std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

/// Synthetic mode with an in-memory ground truth; `cfg.ground_truth_bn` is
/// ignored. Tests are nested prefixes of one sample of size max(sample_sizes).
std::vector<ReportRow> run_synthetic(const DiscreteBN& truth, const ExperimentConfig& cfg);

/// One test on one dataset. `reference` may be null.
std::vector<ReportRow> run_test(const std::string& test, const Dataset& d, const MixedGraph* reference,
                                MissingPolicy policy, const ExperimentConfig& cfg);

struct GroundTruthSpec {
    int nodes = 27;
    int arcs = 31;
    int min_arity = 2;
    int max_arity = 7;
    std::uint64_t seed = 0;
};

/// Random DAG with exactly `arcs` edges drawn uniformly over node pairs and
/// oriented along a random node order; Dirichlet(1) CPT rows.
DiscreteBN gen_ground_truth(const GroundTruthSpec& spec);

enum class ReportFormat { Csv, Markdown };

std::vector<std::string> report_columns(const std::vector<ReportRow>& rows);
std::string emit_report(const std::vector<ReportRow>& rows, ReportFormat format);

/// A parsed CSV report: header plus string cells.
struct ReportTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
ReportTable parse_report(const std::string& csv_text);

/// Top-k frequencies per metric (bic, ddm, and auc/cc per target) across
/// all tests of the given reports. The KBG row is left out.
std::string rank_report(const std::vector<ReportTable>& reports, int k = 3);

}  // namespace bnbench

#endif  // BNBENCH_EXPERIMENT_HPP
