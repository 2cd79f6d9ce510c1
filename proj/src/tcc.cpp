#include "ctxcausal/tcc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "ctxcausal/errors.hpp"
#include "ctxcausal/log.hpp"
#include "ctxcausal/stats.hpp"

namespace ctxcausal {

namespace {

bool condition_less(const Condition& x, const Condition& y) {
    if (x.op != y.op) return x.op < y.op;
    return x.value < y.value;
}

bool term_less(const VarCondition& x, const VarCondition& y) {
    if (x.var != y.var) return x.var < y.var;
    return condition_less(x.cond, y.cond);
}

struct AssignmentLess {
    bool operator()(const Assignment& x, const Assignment& y) const {
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), term_less);
    }
};

struct CandidateKey {
    int treatment = -1;
    Assignment ctx;  // sorted by variable id

    bool operator<(const CandidateKey& o) const {
        if (treatment != o.treatment) return treatment < o.treatment;
        return AssignmentLess{}(ctx, o.ctx);
    }
};

enum class Outcome { Pending, Tested, Untestable };

struct Candidate {
    CandidateKey key;
    CausalRule::Provenance provenance;
    int subset_index = -1;
    bool redundant = false;
    Outcome outcome = Outcome::Pending;
    AceResult result;
};

template <typename F>
void for_each_combination(int n, int k, F&& fn) {
    if (k > n) return;
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
        fn(comb);
        int i = k - 1;
        while (i >= 0 && comb[i] == n - k + i) --i;
        if (i < 0) return;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
}

template <typename F>
void parallel_for(std::int64_t count, int workers, F&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawned = static_cast<int>(std::min<std::int64_t>(workers, count));
    pool.reserve(spawned);
    for (int t = 0; t < spawned; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

void validate(const TccParams& params) {
    if (params.theta < 0.0 || params.theta > 1.0) throw DataError("theta must lie in [0, 1]");
    if (params.eta <= 0.0) throw DataError("eta must be positive");
    if (params.m < 1) throw DataError("tree count must be at least 1");
    if (params.max_context_size < 0) throw DataError("max context size cannot be negative");
    if (params.workers < 1) throw DataError("worker count must be at least 1");
}

}  // namespace

bool redundant_test(int treatment, const Assignment& ctx,
                    const std::vector<CausalRule>& discovered) {
    for (const CausalRule& rule : discovered) {
        if (rule.treatment != treatment) continue;
        const bool subset = std::all_of(
            rule.context.begin(), rule.context.end(), [&](const VarCondition& term) {
                return std::find(ctx.begin(), ctx.end(), term) != ctx.end();
            });
        if (subset) return true;
    }
    return false;
}

DiscoveryResult discover(const Dataset& d, const TccParams& params) {
    validate(params);

    std::vector<TreeNode> trees;
    if (params.m == 1)
        trees.push_back(build_tree(d, params.tree));
    else
        trees = build_dmt(d, params.m, params.tree);

    DiscoveryResult out;
    out.variables = d.variables();
    out.target = d.target();
    Diagnostics& diag = out.diagnostics;

    struct SourcedRule {
        DecisionRule rule;
        CausalRule::Provenance origin;
    };
    std::vector<SourcedRule> kept;
    for (std::size_t t = 0; t < trees.size(); ++t) {
        const std::vector<DecisionRule> rules = extract_rules(trees[t]);
        for (std::size_t j = 0; j < rules.size(); ++j) {
            ++diag.rules_total;
            if (rules[j].confidence <= params.theta) continue;
            kept.push_back({rules[j], {static_cast<int>(t), static_cast<int>(j)}});
        }
    }
    diag.rules_kept = static_cast<std::int64_t>(kept.size());
    log::info("decision rules: " + std::to_string(diag.rules_total) + " extracted, " +
              std::to_string(diag.rules_kept) + " above confidence threshold");

    const auto eligible = [&](int v) {
        if (v == d.target() || !d.var(v).is_binary()) return false;
        if (params.treatments) {
            const auto& list = *params.treatments;
            if (std::find(list.begin(), list.end(), v) == list.end()) return false;
        }
        return true;
    };

    std::set<CandidateKey> seen;
    std::vector<CausalRule> discovered;

    for (int level = 0; level <= params.max_context_size; ++level) {
        std::vector<Candidate> candidates;
        for (const SourcedRule& sr : kept) {
            const Assignment& antecedent = sr.rule.antecedent;
            const int len = static_cast<int>(antecedent.size());
            for (int pos = 0; pos < len; ++pos) {
                if (!eligible(antecedent[pos].var)) continue;
                std::vector<int> others;
                others.reserve(len - 1);
                for (int q = 0; q < len; ++q)
                    if (q != pos) others.push_back(q);
                if (level > static_cast<int>(others.size())) continue;
                for_each_combination(
                    static_cast<int>(others.size()), level, [&](const std::vector<int>& comb) {
                        CandidateKey key;
                        key.treatment = antecedent[pos].var;
                        for (const int idx : comb) key.ctx.push_back(antecedent[others[idx]]);
                        std::sort(key.ctx.begin(), key.ctx.end(), term_less);
                        if (!seen.insert(key).second) return;
                        Candidate cand;
                        cand.key = std::move(key);
                        cand.provenance = sr.origin;
                        candidates.push_back(std::move(cand));
                    });
            }
        }
        diag.enumerated += static_cast<std::int64_t>(candidates.size());

        // redundancy against rules accepted at earlier (more general) levels
        for (Candidate& cand : candidates) {
            cand.redundant = redundant_test(cand.key.treatment, cand.key.ctx, discovered);
            if (cand.redundant) ++diag.redundant_skipped;
        }

        // distinct context subsets shared by all candidates of this level
        std::map<Assignment, int, AssignmentLess> ctx_index;
        std::vector<const Assignment*> contexts;
        for (Candidate& cand : candidates) {
            if (cand.redundant) continue;
            const auto [it, fresh] =
                ctx_index.try_emplace(cand.key.ctx, static_cast<int>(contexts.size()));
            if (fresh) contexts.push_back(&it->first);
            cand.subset_index = it->second;
        }

        std::vector<Dataset> subsets(contexts.size());
        std::vector<std::vector<char>> assoc_y(contexts.size());
        parallel_for(static_cast<std::int64_t>(contexts.size()), params.workers,
                     [&](std::int64_t i) {
                         subsets[i] = d.subset(*contexts[i]);
                         assoc_y[i].assign(d.n_vars(), 0);
                         if (subsets[i].n_rows() == 0) return;
                         for (int v = 0; v < d.n_vars(); ++v) {
                             if (v == d.target()) continue;
                             assoc_y[i][v] = stats::association_test(subsets[i], v, d.target(),
                                                                     params.causal.alpha);
                         }
                     });

        std::vector<std::string> failures(candidates.size());
        parallel_for(static_cast<std::int64_t>(candidates.size()), params.workers,
                     [&](std::int64_t i) {
                         Candidate& cand = candidates[i];
                         if (cand.redundant) return;
                         std::set<int> exclude;
                         for (const auto& term : cand.key.ctx) exclude.insert(term.var);
                         try {
                             cand.result =
                                 causal_test_on(subsets[cand.subset_index], cand.key.treatment,
                                                exclude, params.causal, &assoc_y[cand.subset_index]);
                             cand.outcome = Outcome::Tested;
                         } catch (const UntestableError&) {
                             cand.outcome = Outcome::Untestable;
                         } catch (const std::exception& e) {
                             failures[i] = e.what();
                         }
                     });
        for (const std::string& f : failures)
            if (!f.empty()) throw DataError("causal test failed: " + f);

        // acceptance in enumeration order keeps the output deterministic
        for (Candidate& cand : candidates) {
            if (cand.redundant) continue;
            if (cand.outcome == Outcome::Untestable) {
                ++diag.untestable;
                continue;
            }
            ++diag.tested;
            if (std::fabs(cand.result.ace) < params.eta) continue;
            CausalRule rule;
            rule.treatment = cand.key.treatment;
            rule.context = cand.key.ctx;
            rule.ace = cand.result.ace;
            rule.direction = cand.result.ace > 0.0 ? 1 : -1;
            rule.provenance = cand.provenance;
            rule.diagnostics = std::move(cand.result);
            discovered.push_back(std::move(rule));
            ++diag.accepted;
        }
    }

    std::sort(discovered.begin(), discovered.end(), [](const CausalRule& x, const CausalRule& y) {
        if (x.treatment != y.treatment) return x.treatment < y.treatment;
        if (x.context.size() != y.context.size()) return x.context.size() < y.context.size();
        return AssignmentLess{}(x.context, y.context);
    });
    out.rules = std::move(discovered);
    log::info("accepted " + std::to_string(out.rules.size()) + " causal rules (" +
              std::to_string(diag.tested) + " tested, " + std::to_string(diag.untestable) +
              " untestable, " + std::to_string(diag.redundant_skipped) + " redundant)");
    return out;
}

}  // namespace ctxcausal
