#ifndef BNBENCH_MODEL_INTERNAL_HPP
#define BNBENCH_MODEL_INTERNAL_HPP

#include <span>
#include <string>
#include <vector>

#include "bnbench/model.hpp"

namespace bnbench::detail {

/// Dataset column for each name; throws ModelError when one is absent.
std::vector<int> columns_for(const std::vector<std::string>& names, const Dataset& d);

Assignment row_assignment(const Dataset& d, int row, const std::vector<int>& cols);

/// Writes normalized (count + pseudocount) rows into `c`; empty rows become
/// uniform. Returns how many rows were empty.
int normalize_rows(CPT& c, std::span<const double> counts, double pseudocount);

/// Discrete factor over sorted variables, last variable fastest.
struct Factor {
    std::vector<NodeId> vars;
    std::vector<int> cards;
    std::vector<double> values;
};

/// CPT of `node` reduced by the evidence.
Factor cpt_factor(const DiscreteBN& bn, NodeId node, std::span<const int> evidence);
Factor multiply(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, NodeId var);

}  // namespace bnbench::detail

#endif  // BNBENCH_MODEL_INTERNAL_HPP
