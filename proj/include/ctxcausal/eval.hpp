#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctxcausal/synth.hpp"
#include "ctxcausal/tcc.hpp"

namespace ctxcausal::eval {

struct Metrics {
    double precision = 1.0;  // 1 when nothing was predicted
    double recall = 0.0;
    double f1 = 0.0;
    bool recall_defined = true;  // false when the truth set is empty
    std::int64_t tp = 0, n_pred = 0, n_truth = 0;
    std::int64_t credited = 0;  // precision numerator: tp plus ancestor hits under lenient scoring
};

// The facts scoring needs from a rule: treatment variable name and the
// context as (variable name, value label) pairs.
struct ScoredRule {
    std::string treatment;
    std::vector<std::pair<std::string, std::string>> context;
};

struct EvalOptions {
    // strict: a rule counts toward context v only when its context pins the
    // context variable to v. Default (lenient): global rules and rules
    // silent on the context variable count in both contexts, and predictions
    // that hit an indirect ancestor of the target are credited in precision.
    bool strict = false;
};

struct Report {
    std::array<Metrics, 2> per_context;
    Metrics pooled;  // micro-average over the two contexts
};

Report evaluate(const std::vector<ScoredRule>& rules, const GroundTruth& truth,
                const EvalOptions& opts = {});

std::vector<ScoredRule> to_scored_rules(const DiscoveryResult& result);

}  // namespace ctxcausal::eval
