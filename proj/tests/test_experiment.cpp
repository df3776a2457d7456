#include <gtest/gtest.h>

#include <unistd.h>

#include <fstream>
#include <random>

#include "bnbench/experiment.hpp"
#include "bnbench/graph_io.hpp"
#include "support/oracles.hpp"

using namespace bnbench;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("bnbench_" + name + "_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig synthetic_config(std::vector<std::string> algorithms, std::vector<int> sizes) {
    ExperimentConfig cfg;
    for (auto& a : algorithms) cfg.algorithms.push_back({a, a, {}});
    cfg.sample_sizes = std::move(sizes);
    cfg.seed = 3;
    cfg.seed_set = true;
    return cfg;
}

DiscreteBN small_truth() {
    GroundTruthSpec s;
    s.nodes = 6;
    s.arcs = 6;
    s.max_arity = 3;
    s.seed = 11;
    return gen_ground_truth(s);
}

const ReportRow& row_named(const std::vector<ReportRow>& rows, const std::string& alg) {
    for (const auto& r : rows)
        if (r.algorithm == alg) return r;
    throw std::runtime_error("no row " + alg);
}

}  // namespace

TEST(Config, ParsesAllFields) {
    const char* text = R"({
        "data": ["a.csv", "/abs/b.csv"],
        "reference_graph": "ref.txt",
        "algorithms": ["pc", {"name": "fges", "label": "fges-bdeu", "score_kind": "bdeu", "max_degree": 4},
                       {"name": "fci", "possible_dsep_depth": -1, "alpha": 0.05}],
        "missing_policy": ["IMPUTE_STATE_MLE", "EM_MAR"],
        "targets": ["T", {"name": "U", "role": "SECONDARY"}],
        "seed": 42,
        "missing_token": "?",
        "em": {"tolerance": 1e-6, "max_iterations": 50}
    })";
    ExperimentConfig cfg = parse_config(text, "/base");
    ASSERT_EQ(cfg.data.size(), 2u);
    EXPECT_EQ(cfg.data[0], fs::path("/base/a.csv"));
    EXPECT_EQ(cfg.data[1], fs::path("/abs/b.csv"));
    EXPECT_EQ(*cfg.reference_graph, fs::path("/base/ref.txt"));
    ASSERT_EQ(cfg.algorithms.size(), 3u);
    EXPECT_EQ(cfg.algorithms[0].label, "pc");
    EXPECT_EQ(cfg.algorithms[1].label, "fges-bdeu");
    EXPECT_EQ(cfg.algorithms[1].options.score_kind, "bdeu");
    EXPECT_EQ(cfg.algorithms[1].options.max_degree, 4);
    EXPECT_EQ(cfg.algorithms[2].options.possible_dsep_depth, -1);
    EXPECT_DOUBLE_EQ(cfg.algorithms[2].options.alpha, 0.05);
    EXPECT_EQ(cfg.missing_policies, (std::vector<MissingPolicy>{MissingPolicy::ImputeStateMle, MissingPolicy::EmMar}));
    ASSERT_EQ(cfg.targets.size(), 2u);
    EXPECT_EQ(cfg.targets[1].role, TargetRole::Secondary);
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_TRUE(cfg.seed_set);
    EXPECT_EQ(cfg.missing_token, "?");
    EXPECT_DOUBLE_EQ(cfg.em.tolerance, 1e-6);
    EXPECT_EQ(cfg.em.max_iterations, 50);
    EXPECT_FALSE(cfg.synthetic());
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(parse_config("{"), ConfigError);
    EXPECT_THROW(parse_config("[]"), ConfigError);
    EXPECT_THROW(parse_config(R"({"algorithms": ["ccd"]})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"algorithms": [{"alpha": 0.1}]})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"missing_policy": "DROP"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"missing_policy": []})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"targets": [{"name": "T", "role": "OTHER"}]})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"seed": "x"})"), ConfigError);
}

TEST(Config, ModeRequirements) {
    EXPECT_THROW(validate_config(parse_config("{}")), ConfigError);
    EXPECT_NO_THROW(validate_config(parse_config(R"({"data": "a.csv"})")));
    EXPECT_THROW(validate_config(parse_config(R"({"ground_truth_bn": "t.bn"})")), ConfigError);
    EXPECT_THROW(validate_config(parse_config(R"({"ground_truth_bn": "t.bn", "sample_sizes": [0]})")), ConfigError);
    ExperimentConfig ok = parse_config(R"({"ground_truth_bn": "t.bn", "sample_sizes": [100, 1000]})");
    EXPECT_TRUE(ok.synthetic());
    EXPECT_NO_THROW(validate_config(ok));
}

TEST(GroundTruth, ExactArcCountAndAcyclic) {
    GroundTruthSpec s;
    s.seed = 4;
    DiscreteBN bn = gen_ground_truth(s);
    EXPECT_EQ(bn.graph().num_nodes(), 27);
    EXPECT_EQ(bn.graph().num_edges(), 31);
    EXPECT_TRUE(bn.graph().only_directed());
    EXPECT_TRUE(is_acyclic(bn.graph()));
    for (const auto& v : bn.variables()) {
        EXPECT_GE(v.states.size(), 2u);
        EXPECT_LE(v.states.size(), 7u);
    }
}

TEST(GroundTruth, TriangleWhenComplete) {
    GroundTruthSpec s;
    s.nodes = 3;
    s.arcs = 3;
    DiscreteBN bn = gen_ground_truth(s);
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) EXPECT_TRUE(bn.graph().adjacent(a, b));
    EXPECT_TRUE(is_acyclic(bn.graph()));
}

TEST(GroundTruth, SeedDetermined) {
    GroundTruthSpec s;
    s.seed = 9;
    EXPECT_EQ(bn_to_string(gen_ground_truth(s)), bn_to_string(gen_ground_truth(s)));
    GroundTruthSpec t = s;
    t.seed = 10;
    EXPECT_NE(bn_to_string(gen_ground_truth(s)), bn_to_string(gen_ground_truth(t)));
}

TEST(GroundTruth, RejectsInfeasibleSpecs) {
    GroundTruthSpec s;
    s.nodes = 4;
    s.arcs = 7;
    EXPECT_THROW(gen_ground_truth(s), ConfigError);
    s.arcs = 2;
    s.min_arity = 1;
    EXPECT_THROW(gen_ground_truth(s), ConfigError);
}

TEST(Synthetic, ReferenceRowIsPerfect) {
    auto rows = run_synthetic(small_truth(), synthetic_config({"pc", "fges"}, {200, 500}));
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].test, "N=200");
    EXPECT_EQ(rows[3].test, "N=500");
    for (const auto& r : rows) {
        ASSERT_TRUE(r.error.empty()) << r.algorithm << ": " << r.error;
        ASSERT_TRUE(r.stats.has_value());
        ASSERT_TRUE(r.arcs.has_value());
        EXPECT_EQ(r.arcs->m + r.arcs->r + r.arcs->d, r.arcs->t);
        if (r.algorithm == "KBG") {
            EXPECT_EQ(*r.arcs, (ArcComparison{0, 0, 0, 6, 6}));
            EXPECT_DOUBLE_EQ(r.ddm, 1.0);
        }
    }
}

TEST(Synthetic, SmallerTestsArePrefixesOfOneSample) {
    DiscreteBN truth = small_truth();
    auto both = run_synthetic(truth, synthetic_config({"fges"}, {200, 500}));
    auto small = run_synthetic(truth, synthetic_config({"fges"}, {200}));
    // the N=200 rows do not depend on which larger sizes were requested
    EXPECT_EQ(emit_report({both[0], both[1]}, ReportFormat::Csv), emit_report(small, ReportFormat::Csv));
}

TEST(Synthetic, Deterministic) {
    DiscreteBN truth = small_truth();
    ExperimentConfig cfg = synthetic_config({"pc", "fges", "fci"}, {300});
    cfg.targets.push_back({truth.variables()[0].name, TargetRole::Primary});
    std::string a = emit_report(run_synthetic(truth, cfg), ReportFormat::Csv);
    std::string b = emit_report(run_synthetic(truth, cfg), ReportFormat::Csv);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find(truth.variables()[0].name + "_auc"), std::string::npos);
}

TEST(RunTest, WithoutReferenceArcColumnsAreEmpty) {
    DiscreteBN truth = small_truth();
    Dataset d = forward_sample(truth, 300, 1);
    auto rows = run_test("real", d, nullptr, MissingPolicy::ImputeStateMle, synthetic_config({"pc"}, {}));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].algorithm, "pc");
    EXPECT_FALSE(rows[0].arcs.has_value());
    EXPECT_TRUE(rows[0].stats.has_value());
    std::string csv = emit_report(rows, ReportFormat::Csv);
    ReportTable t = parse_report(csv);
    ASSERT_EQ(t.rows.size(), 1u);
    auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), name) - t.header.begin());
    };
    EXPECT_EQ(t.rows[0][col("ddm")], "");
    EXPECT_EQ(t.rows[0][col("m")], "");
    EXPECT_NE(t.rows[0][col("bic")], "");
}

TEST(RunTest, EmptyAlgorithmListGivesReferenceOnly) {
    DiscreteBN truth = small_truth();
    Dataset d = forward_sample(truth, 200, 1);
    auto rows = run_test("t", d, &truth.graph(), MissingPolicy::ImputeStateMle, synthetic_config({}, {}));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].algorithm, "KBG");
}

TEST(RunTest, FailingRowDoesNotDisturbOthers) {
    DiscreteBN truth = small_truth();
    Dataset d = forward_sample(truth, 400, 2);
    std::vector<int> cells = d.cells();
    cells[0] = kMissing;
    Dataset holes(d.variables(), cells);

    ExperimentConfig solo = synthetic_config({"pc"}, {});
    ExperimentConfig with_bad = synthetic_config({"fges", "pc"}, {});
    auto a = run_test("t", holes, &truth.graph(), MissingPolicy::EmMar, solo);
    auto b = run_test("t", holes, &truth.graph(), MissingPolicy::EmMar, with_bad);
    const ReportRow& failed = row_named(b, "fges");
    EXPECT_FALSE(failed.error.empty());
    EXPECT_FALSE(failed.stats.has_value());
    EXPECT_EQ(emit_report({row_named(a, "pc")}, ReportFormat::Csv), emit_report({row_named(b, "pc")}, ReportFormat::Csv));
    EXPECT_EQ(emit_report({row_named(a, "KBG")}, ReportFormat::Csv), emit_report({row_named(b, "KBG")}, ReportFormat::Csv));
}

TEST(RunExperiment, RealModeFromFiles) {
    fs::path dir = scratch_dir("real");
    DiscreteBN truth = small_truth();
    {
        std::ofstream out(dir / "sample.csv");
        write_csv(out, forward_sample(truth, 300, 5));
    }
    {
        std::ofstream out(dir / "ref.txt");
        out << graph_to_string(truth.graph());
    }
    {
        std::ofstream out(dir / "cfg.json");
        out << R"({"data": "sample.csv", "reference_graph": "ref.txt", "algorithms": ["pc-stable"],
                   "missing_policy": ["IMPUTE_STATE_MLE", "EM_MAR"], "seed": 1})";
    }
    auto rows = run_experiment(load_config(dir / "cfg.json"));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].test, "sample/IMPUTE_STATE_MLE");
    EXPECT_EQ(rows[2].test, "sample/EM_MAR");
    EXPECT_DOUBLE_EQ(rows[0].ddm, 1.0);
    for (const auto& r : rows) EXPECT_TRUE(r.error.empty()) << r.error;
    fs::remove_all(dir);
}

TEST(Report, CsvRoundTrip) {
    ReportRow r;
    r.test = "N=10, odd \"name\"";
    r.algorithm = "pc";
    r.error = "line one\nline two";
    ReportRow k;
    k.test = r.test;
    k.algorithm = "KBG";
    k.arcs = ArcComparison{1, 2, 0, 3, 5};
    k.ddm = 0.2;
    std::string csv = emit_report({k, r}, ReportFormat::Csv);
    ReportTable t = parse_report(csv);
    EXPECT_EQ(t.header, report_columns({k, r}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1].back(), r.error);
    EXPECT_EQ(t.rows[1][t.rows[1].size() - 2], r.test);
    EXPECT_EQ(t.rows[0][9], "0.200");
    EXPECT_EQ(t.rows[0][5], "1");
}

TEST(Report, MarkdownTablePerTestMarksBest) {
    auto make = [](std::string test, std::string alg, double ddm_value) {
        ReportRow r;
        r.test = std::move(test);
        r.algorithm = std::move(alg);
        r.arcs = ArcComparison{0, 0, 0, 1, 1};
        r.ddm = ddm_value;
        return r;
    };
    std::vector<ReportRow> rows{make("N=1", "KBG", 1.0), make("N=1", "pc", 0.5), make("N=1", "fges", 0.25),
                                make("N=2", "pc", 0.1)};
    std::string md = emit_report(rows, ReportFormat::Markdown);
    EXPECT_NE(md.find("## N=1"), std::string::npos);
    EXPECT_NE(md.find("## N=2"), std::string::npos);
    EXPECT_NE(md.find("<u>0.500</u>"), std::string::npos);
    EXPECT_EQ(md.find("<u>1.000</u>"), std::string::npos);
    EXPECT_EQ(md.find("<u>0.250</u>"), std::string::npos);
}

TEST(Report, RankReportSkipsReferenceRow) {
    std::string csv =
        "algorithm,bic,ddm,test\n"
        "KBG,0,1,N=1\n"
        "pc,-10,0.5,N=1\n"
        "fges,-5,0.2,N=1\n"
        "pc,-3,0.9,N=2\n"
        "fges,-4,0.1,N=2\n";
    std::string out = rank_report({parse_report(csv)}, 1);
    EXPECT_NE(out.find("bic,fges,1,2,50.0"), std::string::npos) << out;
    EXPECT_NE(out.find("ddm,pc,2,2,100.0"), std::string::npos) << out;
    EXPECT_EQ(out.find("KBG"), std::string::npos);
}

TEST(Report, RejectsRaggedCsv) {
    EXPECT_THROW(parse_report("a,b\n1\n"), ConfigError);
}
