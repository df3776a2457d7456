#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("bnbench_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) {
        std::string cmd = "cd \"" + dir_.string() + "\" && \"" BNBENCH_CLI_PATH "\" " + args + " >out.txt 2>err.txt";
        int rc = std::system(cmd.c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(dir_ / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateSampleLearnFitPredict) {
    ASSERT_EQ(run("gen --seed 2 --nodes 5 --arcs 4 --max-arity 3 --out truth.bn"), 0) << read("err.txt");
    ASSERT_EQ(run("sample --bn truth.bn --n 400 --seed 1 --out data.csv"), 0) << read("err.txt");
    const std::string csv = read("data.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);
    ASSERT_EQ(run("learn --data data.csv --algorithm pc-stable --out g.txt"), 0) << read("err.txt");
    ASSERT_EQ(run("fit --graph g.txt --data data.csv --out fitted.bn"), 0) << read("err.txt");
    ASSERT_EQ(run("predict --bn fitted.bn --data data.csv --target X01"), 0) << read("err.txt");
    EXPECT_NE(read("out.txt").find("summary_auc,"), std::string::npos);
    ASSERT_EQ(run("stats --bn fitted.bn --data data.csv"), 0) << read("err.txt");
    EXPECT_EQ(read("out.txt").rfind("chi2,df,p,bic,n\n", 0), 0u);
}

TEST_F(Cli, CompareIdenticalGraphs) {
    write("g.txt", "Graph Nodes:\nA;B;C\n\nGraph Edges:\n1. A --> B\n2. B --> C\n");
    ASSERT_EQ(run("compare --learned g.txt --reference g.txt"), 0) << read("err.txt");
    EXPECT_EQ(read("out.txt"), "a,d,r,m,t,ddm,shd\n0,0,0,2,2,1.000,0\n");
}

TEST_F(Cli, BenchWritesReports) {
    ASSERT_EQ(run("gen --seed 4 --nodes 6 --arcs 6 --out truth.bn"), 0);
    write("cfg.json", R"({"ground_truth_bn": "truth.bn", "sample_sizes": [200], "algorithms": ["pc", "fges"]})");
    ASSERT_EQ(run("bench --config cfg.json --seed 3 --out r.csv --markdown r.md"), 0) << read("err.txt");
    EXPECT_EQ(read("r.csv").rfind("algorithm,chi2,df,p,bic,a,d,r,m,ddm,test,error\n", 0), 0u);
    EXPECT_NE(read("r.md").find("## N=200"), std::string::npos);
    ASSERT_EQ(run("ranks r.csv"), 0) << read("err.txt");
    EXPECT_EQ(read("out.txt").rfind("metric,algorithm,in_top,tests,percentage\n", 0), 0u);
}

TEST_F(Cli, FailedRowGivesExitTwo) {
    write("d.csv", "A,B,C\n0,1,0\n1,,1\n0,0,0\n1,1,1\n0,1,1\n1,0,0\n");
    write("cfg.json", R"({"data": "d.csv", "algorithms": ["fges", "pc"], "missing_policy": "EM_MAR"})");
    EXPECT_EQ(run("bench --config cfg.json --seed 1 --out r.csv"), 2);
    EXPECT_NE(read("err.txt").find("fges"), std::string::npos);
}

TEST_F(Cli, BadInputGivesExitOne) {
    write("cfg.json", R"({"algorithms": ["pc"]})");
    EXPECT_EQ(run("bench --config cfg.json --seed 1"), 1);
    EXPECT_EQ(run("learn --data missing.csv --algorithm pc"), 1);
    EXPECT_NE(run("learn --data missing.csv --algorithm ccd"), 0);
}
