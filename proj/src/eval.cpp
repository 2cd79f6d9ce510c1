#include "ctxcausal/eval.hpp"

#include <algorithm>
#include <set>

#include "ctxcausal/errors.hpp"

namespace ctxcausal::eval {

namespace {

Metrics score(const std::set<std::string>& pred, const std::set<std::string>& truth,
              const std::set<std::string>& credit) {
    Metrics m;
    m.n_pred = static_cast<std::int64_t>(pred.size());
    m.n_truth = static_cast<std::int64_t>(truth.size());
    for (const auto& name : pred) {
        if (truth.count(name)) ++m.tp;
        if (truth.count(name) || credit.count(name)) ++m.credited;
    }
    m.precision = m.n_pred == 0 ? 1.0 : static_cast<double>(m.credited) / m.n_pred;
    if (m.n_truth == 0) {
        m.recall_defined = false;
        m.recall = 0.0;
    } else {
        m.recall = static_cast<double>(m.tp) / m.n_truth;
    }
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
    return m;
}

enum class Relevance { Pins, Contradicts, Silent };

Relevance relevance(const ScoredRule& rule, const std::string& context_var,
                    const std::string& value) {
    for (const auto& [var, label] : rule.context) {
        if (var != context_var) continue;
        return label == value ? Relevance::Pins : Relevance::Contradicts;
    }
    return Relevance::Silent;
}

}  // namespace

Report evaluate(const std::vector<ScoredRule>& rules, const GroundTruth& truth,
                const EvalOptions& opts) {
    Report report;
    std::int64_t pooled_tp = 0, pooled_credited = 0, pooled_pred = 0, pooled_truth = 0;
    bool any_truth = false;

    for (int v = 0; v < 2; ++v) {
        const std::string value = std::to_string(v);
        std::set<std::string> pred;
        for (const ScoredRule& rule : rules) {
            // the designated context variable is constant inside a context
            // and cannot be one of its causes
            if (rule.treatment == truth.context_var) continue;
            const Relevance rel = relevance(rule, truth.context_var, value);
            const bool counts = opts.strict ? rel == Relevance::Pins : rel != Relevance::Contradicts;
            if (counts) pred.insert(rule.treatment);
        }
        const std::set<std::string> truth_set(truth.direct[v].begin(), truth.direct[v].end());
        std::set<std::string> credit;  // lenient: indirect ancestors count toward precision
        if (!opts.strict) credit.insert(truth.ancestors[v].begin(), truth.ancestors[v].end());

        const Metrics m = score(pred, truth_set, credit);
        report.per_context[v] = m;
        pooled_tp += m.tp;
        pooled_pred += m.n_pred;
        pooled_truth += m.n_truth;
        pooled_credited += m.credited;
        any_truth = any_truth || m.n_truth > 0;
    }

    Metrics& pooled = report.pooled;
    pooled.tp = pooled_tp;
    pooled.credited = pooled_credited;
    pooled.n_pred = pooled_pred;
    pooled.n_truth = pooled_truth;
    pooled.precision = pooled_pred == 0 ? 1.0 : static_cast<double>(pooled_credited) / pooled_pred;
    pooled.recall_defined = any_truth;
    pooled.recall = pooled_truth == 0 ? 0.0 : static_cast<double>(pooled_tp) / pooled_truth;
    pooled.f1 = (pooled.precision + pooled.recall) > 0.0
                    ? 2.0 * pooled.precision * pooled.recall / (pooled.precision + pooled.recall)
                    : 0.0;
    return report;
}

std::vector<ScoredRule> to_scored_rules(const DiscoveryResult& result) {
    std::vector<ScoredRule> rules;
    rules.reserve(result.rules.size());
    for (const CausalRule& rule : result.rules) {
        ScoredRule sr;
        sr.treatment = result.variables.at(rule.treatment).name;
        for (const VarCondition& term : rule.context) {
            const VariableMeta& meta = result.variables.at(term.var);
            std::string label;
            if (term.cond.op == Op::Eq) {
                const int c = static_cast<int>(term.cond.value);
                label = meta.labels.at(c);
            } else {
                label = (term.cond.op == Op::Le ? "<=" : ">") + std::to_string(term.cond.value);
            }
            sr.context.emplace_back(meta.name, std::move(label));
        }
        rules.push_back(std::move(sr));
    }
    return rules;
}

}  // namespace ctxcausal::eval
