#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "bnbench/experiment.hpp"

namespace bnbench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string real4(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string fixed3(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::vector<std::string> target_names(const std::vector<ReportRow>& rows) {
    std::vector<std::string> names;
    for (const auto& r : rows)
        for (const auto& t : r.targets)
            if (std::find(names.begin(), names.end(), t.target) == names.end()) names.push_back(t.target);
    return names;
}

// Cells of one row, aligned with report_columns(); also the numeric value
// of each cell (NaN when empty) for marking the best entries.
std::vector<std::string> row_cells(const ReportRow& r, const std::vector<std::string>& targets) {
    std::vector<std::string> cells{r.algorithm};
    if (r.stats) {
        cells.push_back(real4(r.stats->chi2));
        cells.push_back(std::to_string(r.stats->df));
        cells.push_back(real4(r.stats->p_value));
        cells.push_back(real4(r.stats->bic));
    } else {
        cells.insert(cells.end(), 4, "");
    }
    if (r.arcs) {
        cells.push_back(std::to_string(r.arcs->a));
        cells.push_back(std::to_string(r.arcs->d));
        cells.push_back(std::to_string(r.arcs->r));
        cells.push_back(std::to_string(r.arcs->m));
        cells.push_back(fixed3(r.ddm));
    } else {
        cells.insert(cells.end(), 5, "");
    }
    for (const auto& name : targets) {
        auto it = std::find_if(r.targets.begin(), r.targets.end(),
                               [&](const PredictionReport& p) { return p.target == name; });
        if (it == r.targets.end()) {
            cells.insert(cells.end(), 2, "");
        } else {
            cells.push_back(real4(it->summary_auc));
            cells.push_back(real4(it->cc));
        }
    }
    cells.push_back(r.test);
    cells.push_back(r.error);
    return cells;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_field(std::string s) {
    for (auto& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

bool marked_column(const std::string& name) {
    auto ends_with = [&](const char* suffix) {
        std::string s(suffix);
        return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    return name == "p" || name == "bic" || name == "ddm" || ends_with("_auc") || ends_with("_cc");
}

double cell_value(const std::string& s) {
    if (s.empty()) return kNaN;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    return end != nullptr && *end == '\0' ? v : kNaN;
}

std::vector<std::string> split_csv_line(const std::string& text, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (pos < text.size()) {
        char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

std::vector<std::string> report_columns(const std::vector<ReportRow>& rows) {
    std::vector<std::string> cols{"algorithm", "chi2", "df", "p", "bic", "a", "d", "r", "m", "ddm"};
    for (const auto& t : target_names(rows)) {
        cols.push_back(t + "_auc");
        cols.push_back(t + "_cc");
    }
    cols.push_back("test");
    cols.push_back("error");
    return cols;
}

std::string emit_report(const std::vector<ReportRow>& rows, ReportFormat format) {
    const auto cols = report_columns(rows);
    const auto targets = target_names(rows);
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i]);
        out << '\n';
        for (const auto& r : rows) {
            auto cells = row_cells(r, targets);
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
            out << '\n';
        }
        return out.str();
    }

    std::vector<std::string> tests;
    for (const auto& r : rows)
        if (std::find(tests.begin(), tests.end(), r.test) == tests.end()) tests.push_back(r.test);
    const std::size_t shown = cols.size() - 1;  // the test column becomes the heading
    const std::size_t test_col = cols.size() - 2;
    bool first = true;
    for (const auto& test : tests) {
        std::vector<std::vector<std::string>> table;
        std::vector<bool> scored;
        for (const auto& r : rows)
            if (r.test == test) {
                table.push_back(row_cells(r, targets));
                scored.push_back(r.algorithm != "KBG" && r.error.empty());
            }
        std::vector<double> best(cols.size(), -std::numeric_limits<double>::infinity());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (!marked_column(cols[c])) continue;
            for (std::size_t i = 0; i < table.size(); ++i) {
                double v = cell_value(table[i][c]);
                if (scored[i] && !std::isnan(v)) best[c] = std::max(best[c], v);
            }
        }
        if (!first) out << '\n';
        first = false;
        out << "## " << md_field(test) << "\n\n|";
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (c != test_col) out << ' ' << cols[c] << " |";
        out << "\n|";
        for (std::size_t c = 0; c < shown; ++c) out << "---|";
        out << '\n';
        for (std::size_t i = 0; i < table.size(); ++i) {
            out << '|';
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (c == test_col) continue;
                std::string cell = md_field(table[i][c]);
                double v = cell_value(table[i][c]);
                if (marked_column(cols[c]) && scored[i] && !std::isnan(v) && v == best[c])
                    cell = "<u>" + cell + "</u>";
                out << ' ' << cell << " |";
            }
            out << '\n';
        }
    }
    return out.str();
}

ReportTable parse_report(const std::string& csv_text) {
    ReportTable t;
    std::size_t pos = 0;
    if (csv_text.empty()) return t;
    t.header = split_csv_line(csv_text, pos);
    while (pos < csv_text.size()) {
        auto fields = split_csv_line(csv_text, pos);
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != t.header.size()) throw ConfigError("report row has the wrong number of fields");
        t.rows.push_back(std::move(fields));
    }
    return t;
}

std::string rank_report(const std::vector<ReportTable>& reports, int k) {
    // metric -> test -> (model, value)
    std::vector<std::string> metrics{"bic", "ddm"};
    for (const auto& rep : reports)
        for (const auto& h : rep.header)
            if (marked_column(h) && h != "p" && std::find(metrics.begin(), metrics.end(), h) == metrics.end())
                metrics.push_back(h);

    std::ostringstream out;
    out << "metric,algorithm,in_top,tests,percentage\n";
    for (const auto& metric : metrics) {
        std::map<std::string, MetricTable> by_test;
        std::vector<std::string> test_order;
        for (std::size_t ri = 0; ri < reports.size(); ++ri) {
            const auto& rep = reports[ri];
            auto col = std::find(rep.header.begin(), rep.header.end(), metric);
            auto alg = std::find(rep.header.begin(), rep.header.end(), "algorithm");
            auto tst = std::find(rep.header.begin(), rep.header.end(), "test");
            if (col == rep.header.end() || alg == rep.header.end()) continue;
            const auto ci = static_cast<std::size_t>(col - rep.header.begin());
            const auto ai = static_cast<std::size_t>(alg - rep.header.begin());
            for (const auto& row : rep.rows) {
                if (row[ai] == "KBG") continue;
                std::string test = std::to_string(ri) + ":" +
                                   (tst == rep.header.end() ? "" : row[static_cast<std::size_t>(tst - rep.header.begin())]);
                if (!by_test.count(test)) test_order.push_back(test);
                by_test[test].emplace_back(row[ai], cell_value(row[ci]));
            }
        }
        std::vector<MetricTable> tables;
        for (const auto& t : test_order) tables.push_back(by_test[t]);
        for (const auto& [model, f] : rank_summary(tables, k)) {
            char pct[32];
            std::snprintf(pct, sizeof pct, "%.1f", f.percentage);
            out << csv_field(metric) << ',' << csv_field(model) << ',' << f.in_top << ',' << f.appearances << ','
                << pct << '\n';
        }
    }
    return out.str();
}

}  // namespace bnbench
