#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bnbench/experiment.hpp"
#include "bnbench/graph_io.hpp"
#include "bnbench/orientation.hpp"

using namespace bnbench;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void add_algorithm_options(CLI::App* app, AlgorithmOptions& o) {
    app->add_option("--alpha", o.alpha, "CI test significance level");
    app->add_option("--depth", o.depth, "Maximum conditioning set size (-1 unlimited)");
    app->add_option("--sample-prior", o.score.sample_prior, "BDeu equivalent sample size");
    app->add_option("--structure-prior", o.score.structure_prior, "BDeu structure prior");
    app->add_option("--penalty-discount", o.score.penalty_discount, "BIC penalty multiplier");
    app->add_flag("--faithfulness-speedup", o.faithfulness_speedup, "Skip marginally independent pairs");
    app->add_option("--max-degree", o.max_degree, "Degree bound for insertions");
    app->add_option("--maxp-depth", o.maxp_depth, "Separating-set bound for the max-p heuristic");
    app->add_option("--maxp-heuristic", o.maxp_heuristic, "Bound the max-p search by --maxp-depth");
    app->add_option("--max-discriminating-path", o.max_discriminating_path, "-1 unlimited");
    app->add_flag("--complete-rule-set", o.complete_rule_set, "Use the extended FCI rules");
    app->add_option("--possible-dsep-depth", o.possible_dsep_depth, "Possible-D-SEP set bound (-1 unlimited)");
    app->add_option("--score-kind", o.score_kind, "bdeu or bic")->check(CLI::IsMember({"bdeu", "bic"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Bayesian network structure learning benchmark"};
    app.require_subcommand(1);
    std::string missing_token;
    app.add_option("--missing-token", missing_token, "Cell text that marks a missing value");

    // learn
    auto* learn = app.add_subcommand("learn", "Learn a graph with one algorithm");
    std::string data_path, out_path, algorithm;
    AlgorithmOptions options;
    learn->add_option("--data", data_path, "CSV file")->required();
    learn->add_option("--algorithm", algorithm, "Algorithm name")->required()->check(CLI::IsMember(algorithm_names()));
    learn->add_option("--out", out_path, "Graph file (default stdout)");
    add_algorithm_options(learn, options);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit CPTs for a DAG");
    std::string graph_path, method = "mle";
    std::uint64_t seed = 0;
    double pseudocount = 0.0;
    fit->add_option("--graph", graph_path, "Graph file")->required();
    fit->add_option("--data", data_path, "CSV file")->required();
    fit->add_option("--method", method, "mle or em")->check(CLI::IsMember({"mle", "em"}));
    fit->add_option("--pseudocount", pseudocount, "MLE pseudocount");
    fit->add_option("--seed", seed, "Seed for orienting non-DAG input and EM initialisation");
    fit->add_option("--out", out_path, "BN file (default stdout)");

    // predict
    auto* pred = app.add_subcommand("predict", "Predict a target and report AUC and CC");
    std::string bn_path, target;
    pred->add_option("--bn", bn_path, "BN file")->required();
    pred->add_option("--data", data_path, "CSV file")->required();
    pred->add_option("--target", target, "Target variable")->required();
    pred->add_option("--out", out_path, "Report file (default stdout)");

    // sample
    auto* sample = app.add_subcommand("sample", "Draw forward samples from a BN");
    int rows = 0;
    sample->add_option("--bn", bn_path, "BN file")->required();
    sample->add_option("--n", rows, "Number of rows")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Random seed")->required();
    sample->add_option("--out", out_path, "CSV file (default stdout)");

    // compare
    auto* compare = app.add_subcommand("compare", "Compare a learned graph with a reference graph");
    std::string reference_path;
    compare->add_option("--learned", graph_path, "Learned graph file")->required();
    compare->add_option("--reference", reference_path, "Reference graph file")->required();
    compare->add_option("--seed", seed, "Seed for orienting non-DAG input");

    // stats
    auto* stats = app.add_subcommand("stats", "Model statistics of a BN on data");
    stats->add_option("--bn", bn_path, "BN file")->required();
    stats->add_option("--data", data_path, "CSV file")->required();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random ground-truth BN");
    GroundTruthSpec spec;
    gen->add_option("--seed", spec.seed, "Random seed")->required();
    gen->add_option("--nodes", spec.nodes, "Node count");
    gen->add_option("--arcs", spec.arcs, "Arc count");
    gen->add_option("--min-arity", spec.min_arity, "Smallest state count");
    gen->add_option("--max-arity", spec.max_arity, "Largest state count");
    gen->add_option("--out", out_path, "BN file (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment config and write the report");
    std::string config_path, format = "csv", markdown_path;
    std::vector<std::string> data_override, algorithm_override, policy_override, target_override;
    std::vector<int> sizes_override;
    std::string reference_override, truth_override;
    bench->add_option("--config", config_path, "JSON config")->required();
    bench->add_option("--seed", seed, "Run seed")->required();
    bench->add_option("--out", out_path, "Report file (default stdout)");
    bench->add_option("--format", format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
    bench->add_option("--markdown", markdown_path, "Also write a markdown report here");
    bench->add_option("--data", data_override, "Override data files");
    bench->add_option("--reference-graph", reference_override, "Override the reference graph");
    bench->add_option("--ground-truth-bn", truth_override, "Override the ground-truth BN");
    bench->add_option("--algorithms", algorithm_override, "Override the algorithm list");
    bench->add_option("--missing-policy", policy_override, "Override missing-data policies");
    bench->add_option("--targets", target_override, "Override target variables");
    bench->add_option("--sample-sizes", sizes_override, "Override sample sizes");

    // ranks
    auto* ranks = app.add_subcommand("ranks", "Top-k frequencies across CSV reports");
    std::vector<std::string> report_paths;
    int k = 3;
    ranks->add_option("reports", report_paths, "CSV report files")->required();
    ranks->add_option("--k", k, "Top-k cut-off")->check(CLI::PositiveNumber);
    ranks->add_option("--out", out_path, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*learn) {
            Dataset d = load_csv(data_path, missing_token);
            write_text(out_path, graph_to_string(learn_by_name(algorithm, d, options)));
        } else if (*fit) {
            MixedGraph g = load_graph(graph_path);
            if (!(g.only_directed() && is_acyclic(g))) g = randomize_orientation(g, seed).dag;
            Dataset d = load_csv(data_path, missing_token);
            DiscreteBN bn;
            if (method == "em") {
                EmOptions eo;
                eo.seed = seed;
                bn = em_fit(g, d, eo).bn;
            } else {
                bn = mle_fit(g, d, pseudocount).bn;
            }
            write_text(out_path, bn_to_string(bn));
        } else if (*pred) {
            DiscreteBN bn = load_bn(bn_path);
            Dataset d = load_csv(data_path, missing_token);
            auto rep = prediction_report(bn, d, target);
            std::ostringstream out;
            out << "target," << rep.target << '\n';
            const int col = d.column_index(target);
            for (std::size_t s = 0; s < rep.per_state_auc.size(); ++s)
                out << "auc," << d.variable(col).states[s] << ',' << fmt("%.4g", rep.per_state_auc[s]) << '\n';
            out << "summary_auc," << fmt("%.4g", rep.summary_auc) << '\n';
            out << "cc," << fmt("%.4g", rep.cc) << '\n';
            out << "excluded_rows," << rep.excluded_rows << '\n';
            write_text(out_path, out.str());
        } else if (*sample) {
            DiscreteBN bn = load_bn(bn_path);
            std::ostringstream out;
            write_csv(out, forward_sample(bn, rows, seed), missing_token);
            write_text(out_path, out.str());
        } else if (*compare) {
            MixedGraph learned = load_graph(graph_path);
            MixedGraph reference = load_graph(reference_path);
            int structural = shd(learned, reference);
            if (!(learned.only_directed() && is_acyclic(learned))) learned = randomize_orientation(learned, seed).dag;
            if (!(reference.only_directed() && is_acyclic(reference)))
                reference = randomize_orientation(reference, seed).dag;
            auto c = arc_comparison(learned, reference);
            std::cout << "a,d,r,m,t,ddm,shd\n"
                      << c.a << ',' << c.d << ',' << c.r << ',' << c.m << ',' << c.t << ','
                      << (c.t > 0 ? fmt("%.3f", ddm(c)) : std::string()) << ',' << structural << '\n';
        } else if (*stats) {
            DiscreteBN bn = load_bn(bn_path);
            Dataset d = load_csv(data_path, missing_token);
            auto s = model_stats(bn, d);
            std::cout << "chi2,df,p,bic,n\n"
                      << fmt("%.4g", s.chi2) << ',' << s.df << ',' << fmt("%.4g", s.p_value) << ','
                      << fmt("%.4g", s.bic) << ',' << s.n << '\n';
        } else if (*gen) {
            write_text(out_path, bn_to_string(gen_ground_truth(spec)));
        } else if (*bench) {
            ExperimentConfig cfg = load_config(config_path);
            cfg.seed = seed;
            cfg.seed_set = true;
            if (!missing_token.empty()) cfg.missing_token = missing_token;
            if (!data_override.empty()) cfg.data.assign(data_override.begin(), data_override.end());
            if (!reference_override.empty()) cfg.reference_graph = reference_override;
            if (!truth_override.empty()) cfg.ground_truth_bn = truth_override;
            if (!sizes_override.empty()) cfg.sample_sizes = sizes_override;
            if (!algorithm_override.empty()) {
                cfg.algorithms.clear();
                for (const auto& name : algorithm_override) {
                    const auto& known = algorithm_names();
                    if (std::find(known.begin(), known.end(), name) == known.end())
                        throw ConfigError("unknown algorithm: " + name);
                    cfg.algorithms.push_back({name, name, {}});
                }
            }
            if (!policy_override.empty()) {
                cfg.missing_policies.clear();
                for (const auto& p : policy_override) {
                    if (p == "EM_MAR")
                        cfg.missing_policies.push_back(MissingPolicy::EmMar);
                    else if (p == "IMPUTE_STATE_MLE")
                        cfg.missing_policies.push_back(MissingPolicy::ImputeStateMle);
                    else
                        throw ConfigError("unknown missing policy: " + p);
                }
            }
            if (!target_override.empty()) {
                cfg.targets.clear();
                for (const auto& t : target_override) cfg.targets.push_back({t, TargetRole::Primary});
            }
            auto report_rows = run_experiment(cfg);
            write_text(out_path, emit_report(report_rows, format == "csv" ? ReportFormat::Csv : ReportFormat::Markdown));
            if (!markdown_path.empty()) write_text(markdown_path, emit_report(report_rows, ReportFormat::Markdown));
            int status = 0;
            for (const auto& r : report_rows)
                if (!r.error.empty()) {
                    std::cerr << "row " << r.test << '/' << r.algorithm << " failed: " << r.error << '\n';
                    status = 2;
                }
            return status;
        } else if (*ranks) {
            std::vector<ReportTable> reports;
            for (const auto& p : report_paths) reports.push_back(parse_report(read_text(p)));
            write_text(out_path, rank_report(reports, k));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
