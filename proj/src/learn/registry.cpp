#include "bnbench/learn.hpp"

namespace bnbench {
namespace {

ScoreKind parse_score_kind(const std::string& s, ScoreKind fallback) {
    if (s.empty()) return fallback;
    if (s == "bdeu") return ScoreKind::BDeu;
    if (s == "bic") return ScoreKind::Bic;
    throw LearnError("unknown score kind: " + s);
}

FgesParams fges_params(const AlgorithmOptions& o) {
    FgesParams p;
    p.score = o.score;
    p.faithfulness_speedup = o.faithfulness_speedup;
    p.max_degree = o.max_degree;
    p.score_kind = parse_score_kind(o.score_kind, ScoreKind::Bic);
    return p;
}

FciParams fci_params(const AlgorithmOptions& o) {
    FciParams p;
    p.alpha = o.alpha;
    p.depth = o.depth;
    p.max_discriminating_path = o.max_discriminating_path;
    p.complete_rule_set = o.complete_rule_set;
    p.possible_dsep_depth = o.possible_dsep_depth;
    return p;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names{"pc",  "cpc",         "pc-stable", "cpc-stable", "pc-max", "fas",
                                                "fges", "images-bdeu", "fci",       "rfci",       "cfci",   "gfci"};
    return names;
}

MixedGraph learn_by_name(const std::string& name, const Dataset& d, const AlgorithmOptions& o) {
    if (name == "pc" || name == "cpc" || name == "pc-stable" || name == "cpc-stable" || name == "pc-max") {
        PcParams p = pc_preset(name);
        p.alpha = o.alpha;
        p.depth = o.depth;
        p.maxp_depth = o.maxp_depth;
        p.maxp_heuristic = o.maxp_heuristic;
        return pc(d, p);
    }
    if (name == "fas") {
        if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw LearnError("alpha must lie in (0, 1)");
        DataIndependenceTest test(d, o.alpha);
        return fas(test, o.depth, false).skeleton;
    }
    if (name == "fges") return fges(d, fges_params(o));
    if (name == "images-bdeu") {
        FgesParams p = fges_params(o);
        p.score_kind = ScoreKind::BDeu;
        return images_bdeu({d}, p);
    }
    if (name == "fci") return fci(d, fci_params(o), FciVariant::Fci);
    if (name == "rfci") return fci(d, fci_params(o), FciVariant::Rfci);
    if (name == "cfci") {
        FciParams p = fci_params(o);
        p.conservative = true;
        return fci(d, p, FciVariant::Fci);
    }
    if (name == "gfci") return gfci(d, fges_params(o), fci_params(o));
    throw LearnError("unknown algorithm: " + name);
}

}  // namespace bnbench
