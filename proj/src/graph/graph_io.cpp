#include "bnbench/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace bnbench {
namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

char left_char(Mark m) {
    switch (m) {
        case Mark::Arrow: return '<';
        case Mark::Circle: return 'o';
        default: return '-';
    }
}

char right_char(Mark m) {
    switch (m) {
        case Mark::Arrow: return '>';
        case Mark::Circle: return 'o';
        default: return '-';
    }
}

bool parse_token(const std::string& tok, Mark& left, Mark& right) {
    if (tok.size() != 3 || tok[1] != '-') return false;
    switch (tok[0]) {
        case '<': left = Mark::Arrow; break;
        case 'o': left = Mark::Circle; break;
        case '-': left = Mark::Tail; break;
        default: return false;
    }
    switch (tok[2]) {
        case '>': right = Mark::Arrow; break;
        case 'o': right = Mark::Circle; break;
        case '-': right = Mark::Tail; break;
        default: return false;
    }
    return true;
}

bool canonical(const std::string& tok) {
    return tok == "-->" || tok == "---" || tok == "o->" || tok == "o-o" || tok == "<->";
}

}  // namespace

std::string edge_token(Mark at_left, Mark at_right) { return {left_char(at_left), '-', right_char(at_right)}; }

void write_graph(std::ostream& out, const MixedGraph& g) {
    out << "Graph Nodes:\n";
    for (int i = 0; i < g.num_nodes(); ++i) out << (i ? ";" : "") << g.name(i);
    out << "\nGraph Edges:\n";
    int k = 0;
    for (const auto& e : g.edges()) {
        NodeId left = e.a, right = e.b;
        Mark ml = e.mark_a, mr = e.mark_b;
        if (!canonical(edge_token(ml, mr)) && canonical(edge_token(mr, ml))) {
            std::swap(left, right);
            std::swap(ml, mr);
        }
        out << ++k << ". " << g.name(left) << ' ' << edge_token(ml, mr) << ' ' << g.name(right) << '\n';
    }
}

std::string graph_to_string(const MixedGraph& g) {
    std::ostringstream os;
    write_graph(os, g);
    return os.str();
}

void save_graph(const std::filesystem::path& path, const MixedGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot write " + path.string());
    write_graph(out, g);
}

MixedGraph read_graph(std::istream& in) {
    std::string line;
    auto next_nonblank = [&](std::string& dst) {
        while (std::getline(in, line)) {
            dst = trim(line);
            if (!dst.empty()) return true;
        }
        return false;
    };
    std::string text;
    if (!next_nonblank(text) || text != "Graph Nodes:") throw GraphError("expected 'Graph Nodes:'");
    if (!next_nonblank(text)) throw GraphError("missing node list");
    std::vector<std::string> names;
    if (text != "Graph Edges:") {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ';')) {
            item = trim(item);
            if (!item.empty()) names.push_back(item);
        }
        if (!next_nonblank(text) || text != "Graph Edges:") throw GraphError("expected 'Graph Edges:'");
    }
    MixedGraph g(std::move(names));

    for (;;) {
        auto pos = in.tellg();
        if (!std::getline(in, line)) break;
        text = trim(line);
        if (text.empty()) continue;
        auto dot = text.find('.');
        bool numbered = dot != std::string::npos && dot > 0 &&
                        std::all_of(text.begin(), text.begin() + static_cast<long>(dot),
                                    [](char c) { return c >= '0' && c <= '9'; });
        if (!numbered) {
            // Start of another section; hand the line back to the caller.
            in.clear();
            in.seekg(pos);
            break;
        }
        std::istringstream fields(text.substr(dot + 1));
        std::string a, tok, b, extra;
        if (!(fields >> a >> tok >> b) || (fields >> extra)) throw GraphError("malformed edge line: " + text);
        Mark left{}, right{};
        if (!parse_token(tok, left, right)) throw GraphError("unknown edge token: " + tok);
        NodeId ia = g.index_of(a), ib = g.index_of(b);
        if (ia < 0 || ib < 0) throw GraphError("edge references unknown node: " + text);
        g.add_edge(ia, left, ib, right);
    }
    return g;
}

MixedGraph graph_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_graph(in);
}

MixedGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open " + path.string());
    return read_graph(in);
}

}  // namespace bnbench
