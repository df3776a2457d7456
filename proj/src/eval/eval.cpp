#include "bnbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bnbench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Index map from `learned` node ids to `reference` node ids by name.
std::vector<NodeId> align(const MixedGraph& learned, const MixedGraph& reference) {
    if (learned.num_nodes() != reference.num_nodes()) throw EvalError("graphs have different node sets");
    std::vector<NodeId> map(static_cast<std::size_t>(learned.num_nodes()));
    for (NodeId v = 0; v < learned.num_nodes(); ++v) {
        NodeId w = reference.index_of(learned.name(v));
        if (w < 0) throw EvalError("node " + learned.name(v) + " missing from the reference graph");
        map[v] = w;
    }
    return map;
}

}  // namespace

ArcComparison arc_comparison(const MixedGraph& learned, const MixedGraph& reference) {
    if (!learned.only_directed() || !reference.only_directed())
        throw EvalError("arc comparison needs directed graphs");
    const auto to_ref = align(learned, reference);
    std::vector<NodeId> to_learned(to_ref.size());
    for (std::size_t v = 0; v < to_ref.size(); ++v) to_learned[to_ref[v]] = static_cast<NodeId>(v);

    ArcComparison c;
    for (const auto& e : reference.edges()) {
        NodeId from = e.mark_b == Mark::Arrow ? e.a : e.b;
        NodeId to = from == e.a ? e.b : e.a;
        NodeId lf = to_learned[from], lt = to_learned[to];
        ++c.t;
        if (learned.is_directed(lf, lt))
            ++c.m;
        else if (learned.is_directed(lt, lf))
            ++c.r;
        else
            ++c.d;
    }
    for (const auto& e : learned.edges())
        if (!reference.adjacent(to_ref[e.a], to_ref[e.b])) ++c.a;
    return c;
}

double ddm(double m, double r, double a, double d, double t) {
    if (!(t > 0.0)) throw EvalError("DDM is undefined for an empty reference graph");
    return (m + r / 2.0 - a - d) / t;
}

double ddm(const ArcComparison& c) { return ddm(c.m, c.r, c.a, c.d, c.t); }

int shd(const MixedGraph& learned, const MixedGraph& reference) {
    const auto to_ref = align(learned, reference);
    std::vector<NodeId> to_learned(to_ref.size());
    for (std::size_t v = 0; v < to_ref.size(); ++v) to_learned[to_ref[v]] = static_cast<NodeId>(v);
    int distance = 0;
    for (const auto& e : learned.edges()) {
        NodeId ra = to_ref[e.a], rb = to_ref[e.b];
        if (!reference.adjacent(ra, rb))
            ++distance;
        else if (reference.endpoint(ra, rb) != e.mark_b || reference.endpoint(rb, ra) != e.mark_a)
            ++distance;
    }
    for (const auto& e : reference.edges())
        if (!learned.adjacent(to_learned[e.a], to_learned[e.b])) ++distance;
    return distance;
}

double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
    if (scores.size() != positive.size()) throw EvalError("scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });
    double rank_sum = 0.0;
    double pos = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (positive[order[k]]) {
                rank_sum += midrank;
                pos += 1.0;
            }
        i = j;
    }
    const double neg = static_cast<double>(n) - pos;
    if (pos == 0.0 || neg == 0.0) return kNaN;
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

AucResult auc_ovr(const std::vector<std::vector<double>>& posteriors, const std::vector<int>& labels) {
    if (posteriors.size() != labels.size()) throw EvalError("posteriors and labels differ in length");
    AucResult out;
    if (posteriors.empty()) {
        out.summary = kNaN;
        return out;
    }
    const std::size_t k = posteriors.front().size();
    for (const auto& row : posteriors)
        if (row.size() != k) throw EvalError("posterior rows differ in length");
    for (int l : labels)
        if (l < 0 || static_cast<std::size_t>(l) >= k) throw EvalError("label outside the posterior range");
    double weighted = 0.0;
    double weight = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
        std::vector<double> scores(posteriors.size());
        std::vector<bool> positive(posteriors.size());
        double count = 0.0;
        for (std::size_t i = 0; i < posteriors.size(); ++i) {
            scores[i] = posteriors[i][s];
            positive[i] = labels[i] == static_cast<int>(s);
            count += positive[i] ? 1.0 : 0.0;
        }
        double auc = binary_auc(scores, positive);
        out.per_state.push_back(auc);
        if (!std::isnan(auc)) {
            weighted += count * auc;
            weight += count;
        }
    }
    out.summary_defined = weight > 0.0;
    out.summary = out.summary_defined ? weighted / weight : kNaN;
    return out;
}

double cc(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size()) throw EvalError("predictions and labels differ in length");
    long correct = 0;
    long scored = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || predictions[i] < 0) continue;
        ++scored;
        if (predictions[i] == labels[i]) ++correct;
    }
    if (scored == 0) throw EvalError("no rows to score");
    return 100.0 * static_cast<double>(correct) / static_cast<double>(scored);
}

std::map<std::string, RankFrequency> rank_summary(const std::vector<MetricTable>& tests, int k) {
    if (k < 1) throw EvalError("k must be positive");
    std::map<std::string, RankFrequency> out;
    for (const auto& table : tests) {
        std::vector<double> values;
        for (const auto& [model, value] : table) {
            auto& f = out[model];
            if (std::isnan(value)) continue;
            ++f.appearances;
            values.push_back(value);
        }
        if (values.empty()) continue;
        std::sort(values.begin(), values.end(), std::greater<>());
        const double cutoff = values[std::min<std::size_t>(static_cast<std::size_t>(k), values.size()) - 1];
        for (const auto& [model, value] : table)
            if (!std::isnan(value) && value >= cutoff) ++out[model].in_top;
    }
    for (auto& [model, f] : out)
        f.percentage = f.appearances > 0 ? 100.0 * f.in_top / f.appearances : 0.0;
    return out;
}

}  // namespace bnbench
