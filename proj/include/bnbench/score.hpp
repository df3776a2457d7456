#ifndef BNBENCH_SCORE_HPP
#define BNBENCH_SCORE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bnbench/data.hpp"
#include "bnbench/graph.hpp"
#include "bnbench/model.hpp"

namespace bnbench {

struct LocalScoreParams {
    double sample_prior = 1.0;
    double structure_prior = 1.0;
    double penalty_discount = 1.0;
};

/// Whole-model fit statistics. `bic` is chi2 - df * ln(n), higher preferred.
struct ModelStats {
    double chi2 = 0.0;
    std::int64_t df = 0;
    double p_value = 1.0;
    double bic = 0.0;
    std::int64_t n = 0;
    /// Observed cells whose expected count fell below 1e-12 and were skipped.
    std::int64_t skipped_cells = 0;
    /// Df came out negative (reported as is).
    bool df_negative = false;
};

/// Sum over nodes of (k - 1) * product of parent arities. Throws
/// std::overflow_error above 2^62.
std::int64_t free_parameters(const MixedGraph& dag, std::span<const int> arities);

/// m(m-1)/2 - f, possibly negative.
std::int64_t degrees_of_freedom(std::int64_t m, std::int64_t f);

struct Chi2Deviance {
    double value = 0.0;
    std::int64_t skipped_cells = 0;
};

/// Pearson deviance over the distinct observed full-joint cells, with
/// expected count N * P_bn(cell). Requires complete data.
Chi2Deviance chi2_deviance(const DiscreteBN& bn, const Dataset& d);

ModelStats model_stats(const DiscreteBN& bn, const Dataset& d);

/// Data columns: `node` and `parents` index columns of `d`.
double bdeu_local(const Dataset& d, int node, std::span<const int> parents, const LocalScoreParams& p = {});
double bic_local(const Dataset& d, int node, std::span<const int> parents, const LocalScoreParams& p = {});

enum class ScoreKind { BDeu, Bic };

/// Decomposable score with a per-instance cache keyed by (node, parents).
/// One instance belongs to one search run.
class LocalScore {
public:
    virtual ~LocalScore() = default;
    virtual int num_variables() const = 0;
    virtual const std::vector<std::string>& names() const = 0;
    /// `parents` must be sorted.
    double local(int node, std::span<const int> parents);
    double total(const MixedGraph& dag);

protected:
    virtual double compute(int node, std::span<const int> parents) = 0;

private:
    std::map<std::vector<int>, double> cache_;
};

class DataLocalScore final : public LocalScore {
public:
    DataLocalScore(const Dataset& d, ScoreKind kind, LocalScoreParams params = {});
    int num_variables() const override { return data_.num_columns(); }
    const std::vector<std::string>& names() const override { return names_; }

protected:
    double compute(int node, std::span<const int> parents) override;

private:
    const Dataset& data_;
    std::vector<std::string> names_;
    ScoreKind kind_;
    LocalScoreParams params_;
};

/// Arithmetic mean of per-dataset BDeu local scores.
class MeanBdeuScore final : public LocalScore {
public:
    MeanBdeuScore(const std::vector<Dataset>& datasets, LocalScoreParams params = {});
    int num_variables() const override { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const override { return names_; }

protected:
    double compute(int node, std::span<const int> parents) override;

private:
    const std::vector<Dataset>& datasets_;
    std::vector<std::string> names_;
    LocalScoreParams params_;
};

}  // namespace bnbench

#endif  // BNBENCH_SCORE_HPP
