#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxcausal/dataset.hpp"
#include "ctxcausal/stats.hpp"

namespace ctxcausal {

struct TreeConfig {
    int min_leaf = 0;  // 0 = auto: max(20, 1% of n)
    double fisher_alpha = 0.05;
    int max_depth = 8;
    bool numeric_splits = true;

    std::int64_t resolved_min_leaf(std::int64_t n) const {
        return min_leaf > 0 ? min_leaf : std::max<std::int64_t>(20, n / 100);
    }
};

struct TreeNode {
    std::array<std::int64_t, 2> class_counts{0, 0};
    int predicted = 0;  // majority class, ties to 0
    std::optional<stats::Split> split;
    std::vector<Condition> branch_conditions;  // parallel to children
    std::vector<TreeNode> children;
    // variables that offered a qualifying split here; the significance test
    // corrects for having picked the best of them
    int candidate_vars = 0;

    bool is_leaf() const { return children.empty(); }
    std::int64_t n() const { return class_counts[0] + class_counts[1]; }
};

// A root-to-leaf path read as (X = x) -> (Y = y).
struct DecisionRule {
    Assignment antecedent;  // ordered root -> leaf
    int consequent = 0;
    std::int64_t support = 0;
    double confidence = 0.0;
};

// Greedy gain-ratio induction with the usual stopping rules (purity,
// max_depth, no split keeps every child at min_leaf), followed by a
// bottom-up pass that collapses any internal node whose split is not
// significantly associated with the target under the exact test.
TreeNode build_tree(const Dataset& d, const TreeConfig& cfg, const std::set<int>& excluded = {});

// One rule per root-to-leaf path, deterministic left-to-right order.
std::vector<DecisionRule> extract_rules(const TreeNode& t);

// Diversified multiple trees: tree i excludes every split variable used by
// trees 1..i-1, so the returned trees have pairwise-disjoint variable sets.
// A tree after the first that degenerates to a single leaf stops the
// sequence and is not returned.
std::vector<TreeNode> build_dmt(const Dataset& d, int m, const TreeConfig& cfg);

std::set<int> split_variables(const TreeNode& t);

std::string dump_tree(const TreeNode& t, const Dataset& d);

}  // namespace ctxcausal
