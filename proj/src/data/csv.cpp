#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "bnbench/data.hpp"

namespace bnbench {
namespace {

// Splits one record; handles quoted fields with embedded commas, doubled
// quotes and line breaks. Returns false at EOF with nothing read.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            break;
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

bool blank(const std::vector<std::string>& fields) { return fields.size() == 1 && fields[0].empty(); }

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& missing_token) {
    std::vector<std::string> header;
    if (!read_record(in, header) || blank(header)) throw DataError("empty CSV input");
    const std::size_t m = header.size();

    std::vector<std::vector<std::string>> raw;
    std::vector<std::string> fields;
    while (read_record(in, fields)) {
        if (blank(fields) && m != 1) continue;
        if (fields.size() != m)
            throw DataError("row " + std::to_string(raw.size() + 1) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(m));
        raw.push_back(fields);
    }
    if (raw.empty()) throw DataError("CSV has a header but no rows");

    std::vector<Variable> vars(m);
    std::vector<std::map<std::string, int>> lookup(m);
    for (std::size_t c = 0; c < m; ++c) {
        vars[c].name = header[c];
        for (const auto& row : raw)
            if (row[c] != missing_token) lookup[c].emplace(row[c], 0);
        int idx = 0;
        for (auto& [label, state] : lookup[c]) {
            state = idx++;
            vars[c].states.push_back(label);
        }
        if (vars[c].arity() < 2 || vars[c].arity() > kMaxArity)
            throw DataError("column " + header[c] + " has arity " + std::to_string(vars[c].arity()) +
                            ", expected 2.." + std::to_string(kMaxArity));
    }
    std::vector<int> cells;
    cells.reserve(raw.size() * m);
    for (const auto& row : raw)
        for (std::size_t c = 0; c < m; ++c)
            cells.push_back(row[c] == missing_token ? kMissing : lookup[c].at(row[c]));
    return Dataset(std::move(vars), std::move(cells));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& missing_token) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_csv(in, missing_token);
}

void write_csv(std::ostream& out, const Dataset& d, const std::string& missing_token) {
    for (int c = 0; c < d.num_columns(); ++c) out << (c ? "," : "") << quote(d.variable(c).name);
    out << '\n';
    for (int r = 0; r < d.num_rows(); ++r) {
        for (int c = 0; c < d.num_columns(); ++c) {
            int s = d.at(r, c);
            out << (c ? "," : "") << quote(s == kMissing ? missing_token : d.variable(c).states[s]);
        }
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& d, const std::string& missing_token) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(out, d, missing_token);
}

}  // namespace bnbench
