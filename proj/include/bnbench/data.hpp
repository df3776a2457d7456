#ifndef BNBENCH_DATA_HPP
#define BNBENCH_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnbench {

inline constexpr int kMissing = -1;
inline constexpr int kMaxArity = 32;
inline constexpr const char* kMissingStateLabel = "MISSING";

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Variable {
    std::string name;
    std::vector<std::string> states;

    int arity() const { return static_cast<int>(states.size()); }
    /// -1 when absent.
    int state_index(const std::string& label) const;

    bool operator==(const Variable&) const = default;
};

/// Discrete data table; cells hold a state index or kMissing. Row-major.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Variable> variables, std::vector<int> cells);

    int num_rows() const { return rows_; }
    int num_columns() const { return static_cast<int>(variables_.size()); }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(int col) const { return variables_.at(static_cast<std::size_t>(col)); }
    int arity(int col) const { return variable(col).arity(); }
    std::vector<int> arities() const;
    std::vector<std::string> names() const;
    /// -1 when absent.
    int column_index(const std::string& name) const;

    int at(int row, int col) const { return cells_[static_cast<std::size_t>(row) * variables_.size() + col]; }
    std::span<const int> row(int r) const {
        return {cells_.data() + static_cast<std::size_t>(r) * variables_.size(), variables_.size()};
    }
    const std::vector<int>& cells() const { return cells_; }

    bool has_missing() const;
    std::int64_t missing_count() const;

    /// First `n` rows.
    Dataset head(int n) const;
    /// Rows with no missing cell.
    Dataset complete_rows() const;
    /// Columns in the given order.
    Dataset select_columns(const std::vector<int>& cols) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<Variable> variables_;
    std::vector<int> cells_;
    int rows_ = 0;
};

/// Parses comma-separated text with a header line. Optional double quotes,
/// `\n` or `\r\n`. Each column's states are its distinct non-missing tokens in
/// lexicographic order; cells equal to `missing_token` become kMissing.
Dataset parse_csv(std::istream& in, const std::string& missing_token = "");
Dataset load_csv(const std::filesystem::path& path, const std::string& missing_token = "");

/// Writes state labels; missing cells become `missing_token`.
void write_csv(std::ostream& out, const Dataset& d, const std::string& missing_token = "");
void save_csv(const std::filesystem::path& path, const Dataset& d, const std::string& missing_token = "");

/// Appends a "MISSING" state to every column that has missing cells and
/// assigns it to those cells. Columns without missing cells are unchanged.
Dataset impute_missing_state(const Dataset& d);

struct Discretized {
    Variable variable;
    std::vector<int> states;
    /// Interior cut points; bin i is [edges[i-1], edges[i]).
    std::vector<double> edges;
};

/// Equal-frequency binning at the empirical i/k quantiles with half-open
/// intervals. Cut points are nudged onto distinct values so that every bin is
/// non-empty.
Discretized discretize_equal_frequency(std::span<const double> values, int k, const std::string& name = "x");

/// Counts over the cross product of `vars` (last variable fastest), with
/// listwise deletion of rows missing any of `vars`.
struct ContingencyTable {
    std::vector<int> vars;
    std::vector<int> arities;
    std::vector<std::int64_t> counts;

    std::int64_t total() const;
    std::size_t index(std::span<const int> states) const;
};

ContingencyTable counts(const Dataset& d, const std::vector<int>& vars);

}  // namespace bnbench

#endif  // BNBENCH_DATA_HPP
