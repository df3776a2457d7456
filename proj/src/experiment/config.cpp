#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bnbench/experiment.hpp"

namespace bnbench {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

AlgorithmSpec parse_algorithm(const json& j) {
    AlgorithmSpec a;
    if (j.is_string()) {
        a.name = j.get<std::string>();
    } else if (j.is_object()) {
        if (!j.contains("name")) throw ConfigError("algorithm entry without a name");
        a.name = j.at("name").get<std::string>();
        read_opt(j, "label", a.label);
        auto& o = a.options;
        read_opt(j, "alpha", o.alpha);
        read_opt(j, "depth", o.depth);
        read_opt(j, "sample_prior", o.score.sample_prior);
        read_opt(j, "structure_prior", o.score.structure_prior);
        read_opt(j, "penalty_discount", o.score.penalty_discount);
        read_opt(j, "faithfulness_speedup", o.faithfulness_speedup);
        read_opt(j, "max_degree", o.max_degree);
        read_opt(j, "maxp_depth", o.maxp_depth);
        read_opt(j, "maxp_heuristic", o.maxp_heuristic);
        read_opt(j, "max_discriminating_path", o.max_discriminating_path);
        read_opt(j, "complete_rule_set", o.complete_rule_set);
        read_opt(j, "possible_dsep_depth", o.possible_dsep_depth);
        read_opt(j, "score_kind", o.score_kind);
    } else {
        throw ConfigError("algorithm entries must be names or objects");
    }
    const auto& known = algorithm_names();
    if (std::find(known.begin(), known.end(), a.name) == known.end())
        throw ConfigError("unknown algorithm: " + a.name);
    if (a.label.empty()) a.label = a.name;
    return a;
}

MissingPolicy parse_policy(const std::string& s) {
    if (s == "IMPUTE_STATE_MLE") return MissingPolicy::ImputeStateMle;
    if (s == "EM_MAR") return MissingPolicy::EmMar;
    throw ConfigError("unknown missing policy: " + s);
}

TargetSpec parse_target(const json& j) {
    TargetSpec t;
    if (j.is_string()) {
        t.name = j.get<std::string>();
        return t;
    }
    if (!j.is_object() || !j.contains("name")) throw ConfigError("target entries must be names or objects");
    t.name = j.at("name").get<std::string>();
    std::string role = j.value("role", std::string("PRIMARY"));
    if (role == "PRIMARY")
        t.role = TargetRole::Primary;
    else if (role == "SECONDARY")
        t.role = TargetRole::Secondary;
    else
        throw ConfigError("unknown target role: " + role);
    return t;
}

}  // namespace

std::string policy_name(MissingPolicy p) { return p == MissingPolicy::EmMar ? "EM_MAR" : "IMPUTE_STATE_MLE"; }

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    try {
        if (auto it = j.find("data"); it != j.end()) {
            if (it->is_string())
                cfg.data.push_back(resolve(base_dir, it->get<std::string>()));
            else
                for (const auto& p : *it) cfg.data.push_back(resolve(base_dir, p.get<std::string>()));
        }
        if (auto it = j.find("reference_graph"); it != j.end() && !it->is_null())
            cfg.reference_graph = resolve(base_dir, it->get<std::string>());
        if (auto it = j.find("ground_truth_bn"); it != j.end() && !it->is_null())
            cfg.ground_truth_bn = resolve(base_dir, it->get<std::string>());
        if (auto it = j.find("algorithms"); it != j.end())
            for (const auto& a : *it) cfg.algorithms.push_back(parse_algorithm(a));
        if (auto it = j.find("missing_policy"); it != j.end()) {
            cfg.missing_policies.clear();
            if (it->is_string())
                cfg.missing_policies.push_back(parse_policy(it->get<std::string>()));
            else
                for (const auto& p : *it) cfg.missing_policies.push_back(parse_policy(p.get<std::string>()));
            if (cfg.missing_policies.empty()) throw ConfigError("missing_policy list is empty");
        }
        if (auto it = j.find("targets"); it != j.end())
            for (const auto& t : *it) cfg.targets.push_back(parse_target(t));
        if (auto it = j.find("seed"); it != j.end()) {
            cfg.seed = it->get<std::uint64_t>();
            cfg.seed_set = true;
        }
        read_opt(j, "sample_sizes", cfg.sample_sizes);
        read_opt(j, "missing_token", cfg.missing_token);
        if (auto it = j.find("em"); it != j.end()) {
            read_opt(*it, "tolerance", cfg.em.tolerance);
            read_opt(*it, "max_iterations", cfg.em.max_iterations);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.synthetic()) {
        if (cfg.sample_sizes.empty()) throw ConfigError("synthetic mode needs sample_sizes");
        for (int n : cfg.sample_sizes)
            if (n < 1) throw ConfigError("sample sizes must be positive");
    } else if (cfg.data.empty()) {
        throw ConfigError("real mode needs at least one data file");
    }
}

}  // namespace bnbench
