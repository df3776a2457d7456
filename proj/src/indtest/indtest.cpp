#include "bnbench/indtest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

namespace bnbench {
namespace {

using Column = std::span<const int>;

CITestResult stratified_test(std::span<const Column> columns, std::span<const int> arities, int rows, int x, int y,
                             std::span<const int> s, double alpha, CiStatistic kind) {
    if (x == y) throw std::invalid_argument("ci_test: x and y must differ");
    if (std::find(s.begin(), s.end(), x) != s.end() || std::find(s.begin(), s.end(), y) != s.end())
        throw std::invalid_argument("ci_test: conditioning set contains x or y");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ci_test: alpha must lie in (0, 1)");
    if (x > y) std::swap(x, y);  // canonical order keeps the summation bitwise symmetric

    const int kx = arities[x], ky = arities[y];
    const std::size_t cells = static_cast<std::size_t>(kx) * static_cast<std::size_t>(ky);

    // Stratum keys; fall back to hashing state vectors when the key space overflows.
    constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
    std::uint64_t strata = 1;
    bool dense_keys = true;
    for (int v : s) {
        if (strata > kLimit / static_cast<std::uint64_t>(arities[v])) {
            dense_keys = false;
            break;
        }
        strata *= static_cast<std::uint64_t>(arities[v]);
    }

    std::vector<std::int64_t> tables;
    std::vector<int> direct_slot;
    const bool direct = dense_keys && strata <= static_cast<std::uint64_t>(std::max(rows, 1)) * 4 + 64;
    if (direct) direct_slot.assign(static_cast<std::size_t>(strata), -1);
    std::unordered_map<std::uint64_t, int> hashed_slot;
    std::map<std::vector<int>, int> vector_slot;
    std::vector<int> key_states(s.size());
    int num_slots = 0;

    for (int r = 0; r < rows; ++r) {
        int xs = columns[x][r], ys = columns[y][r];
        if (xs == kMissing || ys == kMissing) continue;
        bool skip = false;
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            int st = columns[s[i]][r];
            if (st == kMissing) {
                skip = true;
                break;
            }
            if (dense_keys)
                key = key * static_cast<std::uint64_t>(arities[s[i]]) + static_cast<std::uint64_t>(st);
            else
                key_states[i] = st;
        }
        if (skip) continue;
        int slot;
        if (direct) {
            int& ref = direct_slot[key];
            if (ref < 0) ref = num_slots++;
            slot = ref;
        } else if (dense_keys) {
            slot = hashed_slot.try_emplace(key, num_slots).first->second;
            if (slot == num_slots) ++num_slots;
        } else {
            slot = vector_slot.try_emplace(key_states, num_slots).first->second;
            if (slot == num_slots) ++num_slots;
        }
        if (static_cast<std::size_t>(slot + 1) * cells > tables.size()) tables.resize((slot + 1) * cells, 0);
        ++tables[static_cast<std::size_t>(slot) * cells + static_cast<std::size_t>(xs) * ky + ys];
    }

    CITestResult res;
    std::vector<std::int64_t> row_sum(kx), col_sum(ky);
    bool any_informative = false;
    for (int slot = 0; slot < num_slots; ++slot) {
        const std::int64_t* t = tables.data() + static_cast<std::size_t>(slot) * cells;
        std::fill(row_sum.begin(), row_sum.end(), 0);
        std::fill(col_sum.begin(), col_sum.end(), 0);
        std::int64_t n = 0;
        for (int i = 0; i < kx; ++i)
            for (int j = 0; j < ky; ++j) {
                row_sum[i] += t[i * ky + j];
                col_sum[j] += t[i * ky + j];
                n += t[i * ky + j];
            }
        int rx = static_cast<int>(std::count_if(row_sum.begin(), row_sum.end(), [](auto v) { return v > 0; }));
        int ry = static_cast<int>(std::count_if(col_sum.begin(), col_sum.end(), [](auto v) { return v > 0; }));
        if (rx < 2 || ry < 2) continue;
        any_informative = true;
        res.dof += (rx - 1) * (ry - 1);
        const double dn = static_cast<double>(n);
        for (int i = 0; i < kx; ++i) {
            if (row_sum[i] == 0) continue;
            for (int j = 0; j < ky; ++j) {
                if (col_sum[j] == 0) continue;
                double expected = static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[j]) / dn;
                double observed = static_cast<double>(t[i * ky + j]);
                if (kind == CiStatistic::G2) {
                    if (observed > 0) res.statistic += 2.0 * observed * std::log(observed / expected);
                } else {
                    double diff = observed - expected;
                    res.statistic += diff * diff / expected;
                }
            }
        }
    }
    res.statistic = std::max(res.statistic, 0.0);
    res.low_power = !any_informative;
    res.p_value = chi_square_upper_tail(res.statistic, res.dof);
    res.independent = res.p_value > alpha;
    return res;
}

}  // namespace

double chi_square_upper_tail(double statistic, double dof) {
    if (dof <= 0.0) return 1.0;
    if (!(statistic > 0.0)) return 1.0;
    if (std::isinf(statistic)) return 0.0;
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

CITestResult ci_test(const Dataset& d, int x, int y, std::span<const int> s, double alpha, CiStatistic kind) {
    const int m = d.num_columns();
    std::vector<std::vector<int>> storage(static_cast<std::size_t>(m));
    std::vector<Column> columns(static_cast<std::size_t>(m));
    auto fill = [&](int c) {
        if (c < 0 || c >= m) throw std::out_of_range("ci_test: column index out of range");
        if (!storage[c].empty() || d.num_rows() == 0) return;
        storage[c].resize(static_cast<std::size_t>(d.num_rows()));
        for (int r = 0; r < d.num_rows(); ++r) storage[c][r] = d.at(r, c);
        columns[c] = storage[c];
    };
    fill(x);
    fill(y);
    for (int v : s) fill(v);
    auto arities = d.arities();
    return stratified_test(columns, arities, d.num_rows(), x, y, s, alpha, kind);
}

bool d_separated(const MixedGraph& dag, NodeId x, NodeId y, std::span<const NodeId> s) {
    const int n = dag.num_nodes();
    std::vector<bool> in_s(static_cast<std::size_t>(n), false);
    for (NodeId v : s) in_s[v] = true;
    if (in_s[x] || in_s[y]) throw std::invalid_argument("d_separated: conditioning set contains x or y");

    // Ancestors of the conditioning set (inclusive): colliders there are open.
    std::vector<bool> anc(static_cast<std::size_t>(n), false);
    std::vector<NodeId> stack(s.begin(), s.end());
    for (NodeId v : s) anc[v] = true;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : dag.parents(v))
            if (!anc[p]) {
                anc[p] = true;
                stack.push_back(p);
            }
    }

    // States: (node, arrived_from_child). Arriving from a child means the
    // trail comes "up" into the node.
    std::vector<std::array<bool, 2>> visited(static_cast<std::size_t>(n), {false, false});
    std::vector<std::pair<NodeId, bool>> queue{{x, true}};
    while (!queue.empty()) {
        auto [v, up] = queue.back();
        queue.pop_back();
        if (visited[v][up]) continue;
        visited[v][up] = true;
        if (v == y) return false;
        if (up) {
            if (in_s[v]) continue;
            for (NodeId p : dag.parents(v)) queue.emplace_back(p, true);
            for (NodeId c : dag.children(v)) queue.emplace_back(c, false);
        } else {
            if (!in_s[v])
                for (NodeId c : dag.children(v)) queue.emplace_back(c, false);
            if (anc[v])
                for (NodeId p : dag.parents(v)) queue.emplace_back(p, true);
        }
    }
    return true;
}

CITestResult dsep_oracle(const MixedGraph& dag, NodeId x, NodeId y, std::span<const NodeId> s) {
    CITestResult r;
    r.independent = d_separated(dag, x, y, s);
    r.p_value = r.independent ? 1.0 : 0.0;
    r.statistic = r.independent ? 0.0 : std::numeric_limits<double>::infinity();
    return r;
}

void SepsetMap::set(int x, int y, std::vector<int> s, double p_value) {
    std::sort(s.begin(), s.end());
    map_[{std::min(x, y), std::max(x, y)}] = Sepset{std::move(s), p_value};
}

const Sepset* SepsetMap::get(int x, int y) const {
    auto it = map_.find({std::min(x, y), std::max(x, y)});
    return it == map_.end() ? nullptr : &it->second;
}

bool SepsetMap::in_sepset(int x, int y, int node) const {
    const Sepset* s = get(x, y);
    return s != nullptr && std::binary_search(s->set.begin(), s->set.end(), node);
}

DataIndependenceTest::DataIndependenceTest(const Dataset& d, double alpha, CiStatistic kind)
    : names_(d.names()), arities_(d.arities()), rows_(d.num_rows()), alpha_(alpha), kind_(kind) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    columns_.assign(static_cast<std::size_t>(d.num_columns()), std::vector<int>(static_cast<std::size_t>(rows_)));
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < d.num_columns(); ++c) columns_[c][r] = d.at(r, c);
}

CITestResult DataIndependenceTest::test(int x, int y, std::span<const int> s) {
    std::vector<int> key(s.begin(), s.end());
    std::sort(key.begin(), key.end());
    key.push_back(std::max(x, y));
    key.push_back(std::min(x, y));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    ++evaluations_;
    std::vector<Column> cols(columns_.begin(), columns_.end());
    std::vector<int> sorted_s(key.begin(), key.end() - 2);
    auto res = stratified_test(cols, arities_, rows_, x, y, sorted_s, alpha_, kind_);
    cache_.emplace(std::move(key), res);
    return res;
}

DSepIndependenceTest::DSepIndependenceTest(MixedGraph dag) : dag_(std::move(dag)) {
    if (!is_acyclic(dag_)) throw GraphError("d-separation oracle requires a DAG");
    for (NodeId v = 0; v < dag_.num_nodes(); ++v) observed_.push_back(v);
    names_ = dag_.names();
}

DSepIndependenceTest::DSepIndependenceTest(MixedGraph dag, std::vector<NodeId> observed)
    : dag_(std::move(dag)), observed_(std::move(observed)) {
    if (!is_acyclic(dag_)) throw GraphError("d-separation oracle requires a DAG");
    for (NodeId v : observed_) names_.push_back(dag_.name(v));
}

CITestResult DSepIndependenceTest::test(int x, int y, std::span<const int> s) {
    std::vector<NodeId> mapped;
    mapped.reserve(s.size());
    for (int v : s) mapped.push_back(observed_.at(static_cast<std::size_t>(v)));
    return dsep_oracle(dag_, observed_.at(static_cast<std::size_t>(x)), observed_.at(static_cast<std::size_t>(y)),
                       mapped);
}

}  // namespace bnbench
