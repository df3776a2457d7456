#ifndef BNBENCH_INDTEST_HPP
#define BNBENCH_INDTEST_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bnbench/data.hpp"
#include "bnbench/graph.hpp"

namespace bnbench {

enum class CiStatistic { G2, Chi2 };

struct CITestResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    bool independent = true;
    /// Every stratum was empty or degenerate; the test carries no evidence.
    bool low_power = false;
};

/// Upper tail of the chi-square distribution; dof <= 0 gives 1.
double chi_square_upper_tail(double statistic, double dof);

/// Stratified G^2 or Pearson test of x _||_ y | s with listwise deletion over
/// {x, y} and s. Degrees of freedom count only rows/columns with positive
/// margin inside each stratum.
CITestResult ci_test(const Dataset& d, int x, int y, std::span<const int> s, double alpha,
                     CiStatistic kind = CiStatistic::G2);

/// d-separation by reachability over active trails.
bool d_separated(const MixedGraph& dag, NodeId x, NodeId y, std::span<const NodeId> s);

/// p = 1 when d-separated, else 0.
CITestResult dsep_oracle(const MixedGraph& dag, NodeId x, NodeId y, std::span<const NodeId> s);

struct Sepset {
    std::vector<int> set;
    double p_value = 1.0;
};

/// Separating sets keyed by unordered pair.
class SepsetMap {
public:
    void set(int x, int y, std::vector<int> s, double p_value);
    const Sepset* get(int x, int y) const;
    bool contains(int x, int y) const { return get(x, y) != nullptr; }
    /// True when `node` is in the recorded set for (x, y); false when none.
    bool in_sepset(int x, int y, int node) const;
    std::size_t size() const { return map_.size(); }
    const std::map<std::pair<int, int>, Sepset>& entries() const { return map_; }

private:
    std::map<std::pair<int, int>, Sepset> map_;
};

/// A conditional-independence query handle used by the search algorithms.
/// Implementations memoize per instance; an instance belongs to one run.
class IndependenceTest {
public:
    virtual ~IndependenceTest() = default;

    virtual const std::vector<std::string>& names() const = 0;
    virtual double alpha() const = 0;
    virtual CITestResult test(int x, int y, std::span<const int> s) = 0;

    int num_variables() const { return static_cast<int>(names().size()); }
};

class DataIndependenceTest final : public IndependenceTest {
public:
    DataIndependenceTest(const Dataset& d, double alpha, CiStatistic kind = CiStatistic::G2);

    const std::vector<std::string>& names() const override { return names_; }
    double alpha() const override { return alpha_; }
    CITestResult test(int x, int y, std::span<const int> s) override;

    std::int64_t evaluations() const { return evaluations_; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> columns_;
    std::vector<int> arities_;
    int rows_ = 0;
    double alpha_;
    CiStatistic kind_;
    std::map<std::vector<int>, CITestResult> cache_;
    std::int64_t evaluations_ = 0;
};

/// d-separation oracle over the observed subset of a DAG's nodes. Index i in
/// queries refers to `observed[i]` in the DAG; the rest are latent.
class DSepIndependenceTest final : public IndependenceTest {
public:
    explicit DSepIndependenceTest(MixedGraph dag);
    DSepIndependenceTest(MixedGraph dag, std::vector<NodeId> observed);

    const std::vector<std::string>& names() const override { return names_; }
    double alpha() const override { return 0.5; }
    CITestResult test(int x, int y, std::span<const int> s) override;

private:
    MixedGraph dag_;
    std::vector<NodeId> observed_;
    std::vector<std::string> names_;
};

}  // namespace bnbench

#endif  // BNBENCH_INDTEST_HPP
