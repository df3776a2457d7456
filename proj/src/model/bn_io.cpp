#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "bnbench/graph_io.hpp"
#include "bnbench/model.hpp"

namespace bnbench {
namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_semicolons(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ";" : "") + items[i];
    return out;
}

bool next_nonblank(std::istream& in, std::string& text) {
    std::string line;
    while (std::getline(in, line)) {
        text = trim(line);
        if (!text.empty()) return true;
    }
    return false;
}

// Splits "<head> | <tail>" at the first bar.
std::pair<std::string, std::string> split_bar(const std::string& text) {
    auto bar = text.find('|');
    if (bar == std::string::npos) throw ModelError("expected '|' in line: " + text);
    return {trim(text.substr(0, bar)), trim(text.substr(bar + 1))};
}

}  // namespace

void write_bn(std::ostream& out, const DiscreteBN& bn) {
    write_graph(out, bn.graph());
    out << "Variable States:\n";
    for (const auto& v : bn.variables()) out << v.name << " | " << join(v.states) << '\n';
    char buf[32];
    for (const auto& c : bn.cpts()) {
        std::vector<std::string> parent_names;
        for (NodeId p : c.parents) parent_names.push_back(bn.graph().name(p));
        out << "CPT " << bn.graph().name(c.node) << " |";
        if (!parent_names.empty()) out << ' ' << join(parent_names);
        out << '\n';
        for (int r = 0; r < c.num_rows(); ++r) {
            for (int k = 0; k < c.arity; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g", c.at(r, k));
                out << (k ? " " : "") << buf;
            }
            out << '\n';
        }
    }
}

std::string bn_to_string(const DiscreteBN& bn) {
    std::ostringstream os;
    write_bn(os, bn);
    return os.str();
}

void save_bn(const std::filesystem::path& path, const DiscreteBN& bn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write " + path.string());
    write_bn(out, bn);
}

DiscreteBN read_bn(std::istream& in) {
    MixedGraph g = read_graph(in);
    const int n = g.num_nodes();
    std::string text;
    if (!next_nonblank(in, text) || text != "Variable States:") throw ModelError("expected 'Variable States:'");
    std::vector<Variable> vars(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!next_nonblank(in, text)) throw ModelError("missing state line");
        auto [name, states] = split_bar(text);
        NodeId v = g.index_of(name);
        if (v < 0) throw ModelError("states for unknown node " + name);
        vars[v].name = name;
        vars[v].states = split_semicolons(states);
    }
    std::vector<int> arities;
    for (const auto& v : vars) {
        if (v.name.empty()) throw ModelError("a node has no state line");
        arities.push_back(v.arity());
    }

    auto cpts = uniform_cpts(g, arities);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        if (!next_nonblank(in, text) || text.rfind("CPT ", 0) != 0) throw ModelError("expected a CPT header");
        auto [name, parents] = split_bar(text.substr(4));
        NodeId v = g.index_of(name);
        if (v < 0 || seen[v]) throw ModelError("bad or repeated CPT for " + name);
        seen[v] = true;
        std::vector<NodeId> parent_ids;
        for (const auto& p : split_semicolons(parents)) parent_ids.push_back(g.index_of(p));
        CPT& c = cpts[v];
        if (parent_ids != c.parents) throw ModelError("CPT parents of " + name + " do not match the graph");
        for (int r = 0; r < c.num_rows(); ++r) {
            if (!next_nonblank(in, text)) throw ModelError("truncated CPT for " + name);
            std::istringstream row(text);
            for (int k = 0; k < c.arity; ++k)
                if (!(row >> c.at(r, k))) throw ModelError("bad probability row for " + name);
        }
    }
    return DiscreteBN(std::move(g), std::move(vars), std::move(cpts));
}

DiscreteBN load_bn(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open " + path.string());
    return read_bn(in);
}

}  // namespace bnbench
