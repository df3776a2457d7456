#include "bnbench/data.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace bnbench {

int Variable::state_index(const std::string& label) const {
    auto it = std::find(states.begin(), states.end(), label);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

Dataset::Dataset(std::vector<Variable> variables, std::vector<int> cells)
    : variables_(std::move(variables)), cells_(std::move(cells)) {
    const std::size_t m = variables_.size();
    std::set<std::string> names;
    for (const auto& v : variables_) {
        if (!names.insert(v.name).second) throw DataError("duplicate variable name: " + v.name);
        if (v.arity() < 1) throw DataError("variable without states: " + v.name);
    }
    if (m == 0) {
        if (!cells_.empty()) throw DataError("cells without variables");
        return;
    }
    if (cells_.size() % m != 0) throw DataError("cell count is not a multiple of the column count");
    rows_ = static_cast<int>(cells_.size() / m);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        int c = cells_[i];
        if (c != kMissing && (c < 0 || c >= variables_[i % m].arity()))
            throw DataError("state index out of range in column " + variables_[i % m].name);
    }
}

std::vector<int> Dataset::arities() const {
    std::vector<int> out;
    out.reserve(variables_.size());
    for (const auto& v : variables_) out.push_back(v.arity());
    return out;
}

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    out.reserve(variables_.size());
    for (const auto& v : variables_) out.push_back(v.name);
    return out;
}

int Dataset::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name) return static_cast<int>(i);
    return -1;
}

bool Dataset::has_missing() const { return std::find(cells_.begin(), cells_.end(), kMissing) != cells_.end(); }

std::int64_t Dataset::missing_count() const { return std::count(cells_.begin(), cells_.end(), kMissing); }

Dataset Dataset::head(int n) const {
    n = std::clamp(n, 0, rows_);
    std::vector<int> cells(cells_.begin(), cells_.begin() + static_cast<long>(n) * num_columns());
    return Dataset(variables_, std::move(cells));
}

Dataset Dataset::complete_rows() const {
    std::vector<int> cells;
    cells.reserve(cells_.size());
    for (int r = 0; r < rows_; ++r) {
        auto rw = row(r);
        if (std::find(rw.begin(), rw.end(), kMissing) == rw.end()) cells.insert(cells.end(), rw.begin(), rw.end());
    }
    return Dataset(variables_, std::move(cells));
}

Dataset Dataset::select_columns(const std::vector<int>& cols) const {
    std::vector<Variable> vars;
    for (int c : cols) vars.push_back(variable(c));
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(rows_) * cols.size());
    for (int r = 0; r < rows_; ++r)
        for (int c : cols) cells.push_back(at(r, c));
    return Dataset(std::move(vars), std::move(cells));
}

Dataset impute_missing_state(const Dataset& d) {
    std::vector<Variable> vars = d.variables();
    std::vector<int> cells = d.cells();
    const int m = d.num_columns();
    std::vector<bool> has_missing(static_cast<std::size_t>(m), false);
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == kMissing) has_missing[i % m] = true;
    for (int c = 0; c < m; ++c) {
        if (!has_missing[c]) continue;
        if (vars[c].state_index(kMissingStateLabel) >= 0)
            throw DataError("column " + vars[c].name + " already has a state named MISSING");
        vars[c].states.emplace_back(kMissingStateLabel);
        if (vars[c].arity() > kMaxArity) throw DataError("arity above limit after imputation: " + vars[c].name);
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == kMissing) cells[i] = vars[i % m].arity() - 1;
    return Dataset(std::move(vars), std::move(cells));
}

Discretized discretize_equal_frequency(std::span<const double> values, int k, const std::string& name) {
    if (k < 2) throw DataError("discretization needs k >= 2");
    if (values.empty()) throw DataError("discretization of an empty vector");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const int n_distinct = static_cast<int>(distinct.size());
    if (k > n_distinct) throw DataError("k exceeds the number of distinct values");

    const std::size_t n = sorted.size();
    Discretized out;
    int prev = 0;
    for (int i = 1; i < k; ++i) {
        double quantile = sorted[(static_cast<std::size_t>(i) * n) / static_cast<std::size_t>(k)];
        int pos = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), quantile) - distinct.begin());
        pos = std::min(std::max(pos, prev + 1), n_distinct - k + i);
        out.edges.push_back(distinct[static_cast<std::size_t>(pos)]);
        prev = pos;
    }

    out.variable.name = name;
    for (int i = 0; i < k; ++i) {
        char label[16];
        std::snprintf(label, sizeof label, "q%02d", i + 1);
        out.variable.states.emplace_back(label);
    }
    out.states.reserve(values.size());
    for (double v : values)
        out.states.push_back(static_cast<int>(std::upper_bound(out.edges.begin(), out.edges.end(), v) -
                                              out.edges.begin()));
    return out;
}

std::int64_t ContingencyTable::total() const {
    std::int64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

std::size_t ContingencyTable::index(std::span<const int> states) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < arities.size(); ++i) idx = idx * static_cast<std::size_t>(arities[i]) + states[i];
    return idx;
}

ContingencyTable counts(const Dataset& d, const std::vector<int>& vars) {
    ContingencyTable t;
    t.vars = vars;
    std::size_t size = 1;
    for (int v : vars) {
        t.arities.push_back(d.arity(v));
        size *= static_cast<std::size_t>(d.arity(v));
    }
    t.counts.assign(size, 0);
    for (int r = 0; r < d.num_rows(); ++r) {
        std::size_t idx = 0;
        bool skip = false;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            int s = d.at(r, vars[i]);
            if (s == kMissing) {
                skip = true;
                break;
            }
            idx = idx * static_cast<std::size_t>(t.arities[i]) + static_cast<std::size_t>(s);
        }
        if (!skip) ++t.counts[idx];
    }
    return t;
}

}  // namespace bnbench
