#include "ctxcausal/tree.hpp"

#include <algorithm>
#include <sstream>

#include "ctxcausal/errors.hpp"

namespace ctxcausal {

namespace {

// gains at or below this are treated as zero; guards against picking splits
// whose information gain is pure floating-point noise
constexpr double kMinGain = 1e-12;

struct BestSplit {
    stats::Split split;
    double ratio = -1.0;
    bool found = false;
    int candidate_vars = 0;  // variables with at least one qualifying split
};

std::array<std::int64_t, 2> class_counts(const Dataset& d) {
    std::array<std::int64_t, 2> counts{0, 0};
    const std::int64_t n = d.n_rows();
    for (std::int64_t i = 0; i < n; ++i) ++counts[d.y(i)];
    return counts;
}

void consider(BestSplit& best, const stats::Split& split, const stats::SplitScore& score) {
    if (score.gain <= kMinGain || score.ratio <= 0.0) return;
    // ties break to the lowest variable id, then the lowest threshold;
    // candidates arrive in exactly that order, so strict improvement suffices
    if (!best.found || score.ratio > best.ratio) {
        best.split = split;
        best.ratio = score.ratio;
        best.found = true;
    }
}

void merge(BestSplit& best, const BestSplit& other) {
    if (!other.found) return;
    if (!best.found || other.ratio > best.ratio) {
        best.split = other.split;
        best.ratio = other.ratio;
        best.found = true;
    }
}

BestSplit pick_split(const Dataset& d, const TreeConfig& cfg, std::int64_t min_leaf,
                     const std::vector<char>& blocked) {
    BestSplit best;
    const std::int64_t n = d.n_rows();
    for (int v = 0; v < d.n_vars(); ++v) {
        if (blocked[v] || v == d.target()) continue;
        const auto& meta = d.var(v);
        if (meta.kind == VarKind::Categorical) {
            std::vector<std::array<std::int64_t, 2>> children(meta.cardinality(), {0, 0});
            for (std::int64_t i = 0; i < n; ++i) ++children[d.category(i, v)][d.y(i)];
            const bool qualifies =
                std::all_of(children.begin(), children.end(), [&](const auto& ch) {
                    return ch[0] + ch[1] >= min_leaf;
                });
            if (!qualifies) continue;
            ++best.candidate_vars;
            consider(best, {v, false, 0.0}, stats::split_score_from_counts(children));
        } else if (cfg.numeric_splits) {
            std::vector<std::pair<double, int>> values(n);
            for (std::int64_t i = 0; i < n; ++i) values[i] = {d.value(i, v), d.y(i)};
            std::sort(values.begin(), values.end());
            std::array<std::int64_t, 2> left{0, 0};
            std::array<std::int64_t, 2> total{0, 0};
            for (const auto& [value, cls] : values) ++total[cls];
            BestSplit local;
            bool viable = false;
            for (std::int64_t i = 0; i + 1 < n; ++i) {
                ++left[values[i].second];
                if (values[i].first == values[i + 1].first) continue;
                const std::int64_t n_left = i + 1;
                if (n_left < min_leaf || n - n_left < min_leaf) continue;
                viable = true;
                const std::array<std::int64_t, 2> right{total[0] - left[0], total[1] - left[1]};
                const double threshold = 0.5 * (values[i].first + values[i + 1].first);
                consider(local, {v, true, threshold}, stats::split_score_from_counts({left, right}));
            }
            best.candidate_vars += viable;
            merge(best, local);
        }
    }
    return best;
}

TreeNode induce(const Dataset& d, const TreeConfig& cfg, std::int64_t min_leaf, int depth,
                std::vector<char> blocked) {
    TreeNode node;
    node.class_counts = class_counts(d);
    node.predicted = node.class_counts[1] > node.class_counts[0] ? 1 : 0;

    const bool pure = node.class_counts[0] == 0 || node.class_counts[1] == 0;
    if (pure || depth >= cfg.max_depth) return node;

    const BestSplit best = pick_split(d, cfg, min_leaf, blocked);
    if (!best.found) return node;

    node.split = best.split;
    node.candidate_vars = best.candidate_vars;
    blocked[best.split.var] = 1;  // one condition per variable on any path
    if (best.split.numeric) {
        node.branch_conditions = {{Op::Le, best.split.threshold}, {Op::Gt, best.split.threshold}};
    } else {
        const int k = d.var(best.split.var).cardinality();
        for (int c = 0; c < k; ++c)
            node.branch_conditions.push_back({Op::Eq, static_cast<double>(c)});
    }
    for (const Condition& cond : node.branch_conditions) {
        const Dataset child = d.subset({{best.split.var, cond}});
        node.children.push_back(induce(child, cfg, min_leaf, depth + 1, blocked));
    }
    return node;
}

// significance of a node's split against the target: the best (smallest)
// oriented exact-test p over child-vs-rest tables
double node_split_p(const TreeNode& node) {
    double best = 1.0;
    for (const TreeNode& child : node.children) {
        const std::int64_t rest_pos = node.class_counts[1] - child.class_counts[1];
        const std::int64_t rest_neg = node.class_counts[0] - child.class_counts[0];
        const ContingencyTable t{child.class_counts[1], child.class_counts[0], rest_pos, rest_neg};
        best = std::min(best, stats::fisher_oriented_p(t));
    }
    return best;
}

void prune(TreeNode& node, double alpha) {
    if (node.is_leaf()) return;
    for (TreeNode& child : node.children) prune(child, alpha);
    // the split is the argmax over candidate_vars variables and two
    // orientations, so the node is tested at a Bonferroni share of alpha
    const double level = alpha / (2.0 * std::max(1, node.candidate_vars));
    if (node_split_p(node) > level) {
        node.children.clear();
        node.branch_conditions.clear();
        node.split.reset();
        node.candidate_vars = 0;
    }
}

void collect_rules(const TreeNode& node, Assignment& path, std::vector<DecisionRule>& out) {
    if (node.is_leaf()) {
        DecisionRule rule;
        rule.antecedent = path;
        rule.consequent = node.predicted;
        rule.support = node.n();
        rule.confidence = rule.support > 0
                              ? static_cast<double>(node.class_counts[node.predicted]) / rule.support
                              : 0.0;
        out.push_back(std::move(rule));
        return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back({node.split->var, node.branch_conditions[i]});
        collect_rules(node.children[i], path, out);
        path.pop_back();
    }
}

void collect_split_vars(const TreeNode& node, std::set<int>& out) {
    if (node.is_leaf()) return;
    out.insert(node.split->var);
    for (const TreeNode& child : node.children) collect_split_vars(child, out);
}

void dump(const TreeNode& node, const Dataset& d, int indent, std::ostringstream& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (node.is_leaf()) {
        out << pad << "-> Y=" << node.predicted << "  [" << node.class_counts[0] << ", "
            << node.class_counts[1] << "]\n";
        return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        out << pad << condition_to_string(d, {node.split->var, node.branch_conditions[i]}) << "  ["
            << node.children[i].class_counts[0] << ", " << node.children[i].class_counts[1]
            << "]\n";
        dump(node.children[i], d, indent + 1, out);
    }
}

}  // namespace

TreeNode build_tree(const Dataset& d, const TreeConfig& cfg, const std::set<int>& excluded) {
    if (d.n_rows() == 0) throw DataError("cannot build a tree on an empty dataset");
    if (excluded.count(d.target())) throw DataError("target cannot be excluded");
    std::vector<char> blocked(d.n_vars(), 0);
    for (const int v : excluded) blocked.at(v) = 1;
    TreeNode root = induce(d, cfg, cfg.resolved_min_leaf(d.n_rows()), 0, std::move(blocked));
    prune(root, cfg.fisher_alpha);
    return root;
}

std::vector<DecisionRule> extract_rules(const TreeNode& t) {
    std::vector<DecisionRule> rules;
    Assignment path;
    collect_rules(t, path, rules);
    return rules;
}

std::vector<TreeNode> build_dmt(const Dataset& d, int m, const TreeConfig& cfg) {
    if (m < 1) throw DataError("tree count must be at least 1");
    std::vector<TreeNode> trees;
    std::set<int> excluded;
    for (int i = 0; i < m; ++i) {
        TreeNode tree = build_tree(d, cfg, excluded);
        if (i > 0 && tree.is_leaf()) break;  // no informative variables left
        const std::set<int> used = split_variables(tree);
        excluded.insert(used.begin(), used.end());
        trees.push_back(std::move(tree));
    }
    return trees;
}

std::set<int> split_variables(const TreeNode& t) {
    std::set<int> vars;
    collect_split_vars(t, vars);
    return vars;
}

std::string dump_tree(const TreeNode& t, const Dataset& d) {
    std::ostringstream out;
    out << "root  [" << t.class_counts[0] << ", " << t.class_counts[1] << "]\n";
    dump(t, d, 1, out);
    return out.str();
}

}  // namespace ctxcausal
