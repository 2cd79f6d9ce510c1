#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctxcausal/causal.hpp"
#include "ctxcausal/dataset.hpp"
#include "ctxcausal/tree.hpp"

namespace ctxcausal {

struct TccParams {
    double theta = 0.6;       // minimal confidence
    double eta = 0.1;         // minimal causal effect
    int m = 1;                // tree count; 1 = single-tree mode
    int max_context_size = 2;
    TreeConfig tree;
    CausalParams causal;
    std::optional<std::vector<int>> treatments;  // whitelist of variable ids
    std::uint64_t seed = 0;                      // echoed into output metadata
    int workers = 1;
};

struct CausalRule {
    int treatment = -1;
    Assignment context;  // canonical var-id order; empty = global rule
    double ace = 0.0;
    int direction = 0;  // sign of ace

    struct Provenance {
        int tree = 0;
        int rule = 0;
    } provenance;

    AceResult diagnostics;
};

struct Diagnostics {
    std::int64_t rules_total = 0;
    std::int64_t rules_kept = 0;  // confidence above theta
    std::int64_t enumerated = 0;  // distinct (treatment, context) candidates
    std::int64_t redundant_skipped = 0;
    std::int64_t tested = 0;
    std::int64_t untestable = 0;
    std::int64_t accepted = 0;
};

struct DiscoveryResult {
    std::vector<CausalRule> rules;  // canonical order
    Diagnostics diagnostics;
    std::vector<VariableMeta> variables;  // snapshot for name resolution
    int target = -1;
};

// True iff `discovered` already holds a rule with the same treatment whose
// context is a subset of (or equal to) the candidate context, the empty
// global context included. Such candidates are implied by the more general
// rule and are skipped.
bool redundant_test(int treatment, const Assignment& ctx,
                    const std::vector<CausalRule>& discovered);

// The full discovery pipeline: build tree(s), keep confident decision
// rules, run global causal tests per antecedent variable, then enumerate
// contexts in ascending cardinality with redundancy pruning. Output order
// and content are independent of the worker count.
DiscoveryResult discover(const Dataset& d, const TccParams& params);

}  // namespace ctxcausal
