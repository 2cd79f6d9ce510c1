#include "ctxcausal/synth.hpp"

#include <algorithm>
#include <numeric>

#include "ctxcausal/errors.hpp"
#include "ctxcausal/rng.hpp"

namespace ctxcausal {

namespace {

// draw order is fixed (edges in j-then-i order, forced edge, then CPTs in
// variable-then-entry order) so a seed pins the network bit for bit
void randomize_cpts(Cbn& cbn, Rng& rng, std::pair<double, double> range) {
    cbn.cpt.assign(cbn.n_vars, {});
    for (int v = 0; v < cbn.n_vars; ++v) {
        const std::size_t rows = std::size_t{1} << cbn.parents[v].size();
        cbn.cpt[v].resize(rows);
        for (std::size_t r = 0; r < rows; ++r)
            cbn.cpt[v][r] = rng.uniform(range.first, range.second);
    }
}

std::size_t parent_config(const Cbn& cbn, int v, const std::vector<int>& values) {
    std::size_t idx = 0;
    const auto& parents = cbn.parents[v];
    for (std::size_t k = 0; k < parents.size(); ++k)
        idx |= static_cast<std::size_t>(values[parents[k]]) << k;
    return idx;
}

std::vector<VariableMeta> binary_variables(int n_vars) {
    std::vector<VariableMeta> vars(n_vars);
    for (int v = 0; v < n_vars; ++v) {
        vars[v].name = v + 1 == n_vars ? "Y" : "X" + std::to_string(v + 1);
        vars[v].kind = VarKind::Categorical;
        vars[v].labels = {"0", "1"};
    }
    return vars;
}

std::vector<std::string> ancestor_names(const Cbn& cbn, const std::vector<VariableMeta>& vars) {
    std::vector<char> mark(cbn.n_vars, 0);
    std::vector<int> frontier = cbn.parents[cbn.target];
    while (!frontier.empty()) {
        const int v = frontier.back();
        frontier.pop_back();
        if (mark[v]) continue;
        mark[v] = 1;
        for (const int p : cbn.parents[v]) frontier.push_back(p);
    }
    std::vector<std::string> names;
    for (int v = 0; v < cbn.n_vars; ++v)
        if (mark[v]) names.push_back(vars[v].name);
    return names;
}

}  // namespace

Cbn random_cbn(int n_vars, std::uint64_t seed, double edge_prob,
               std::pair<double, double> cpt_range, int max_parents) {
    if (n_vars < 3) throw DataError("a network needs at least 3 variables");
    if (edge_prob <= 0.0 || edge_prob >= 1.0) throw DataError("edge probability must lie in (0, 1)");
    if (cpt_range.first <= 0.0 || cpt_range.second >= 1.0 || cpt_range.first > cpt_range.second)
        throw DataError("cpt range must lie inside (0, 1)");

    Rng rng(seed);
    Cbn cbn;
    cbn.n_vars = n_vars;
    cbn.target = n_vars - 1;
    cbn.parents.assign(n_vars, {});
    for (int j = 1; j < n_vars; ++j)
        for (int i = 0; i < j; ++i) {
            if (static_cast<int>(cbn.parents[j].size()) >= max_parents) break;
            if (rng.bernoulli(edge_prob)) cbn.parents[j].push_back(i);
        }
    if (cbn.parents[cbn.target].empty())
        cbn.parents[cbn.target].push_back(static_cast<int>(rng.below(n_vars - 1)));

    randomize_cpts(cbn, rng, cpt_range);
    return cbn;
}

Dataset sample(const Cbn& cbn, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw DataError("sample size must be at least 1");
    Rng rng(seed);
    std::vector<std::vector<double>> columns(cbn.n_vars, std::vector<double>(n));
    std::vector<int> values(cbn.n_vars);
    for (std::int64_t row = 0; row < n; ++row) {
        for (int v = 0; v < cbn.n_vars; ++v) {
            const double p = cbn.cpt[v][parent_config(cbn, v, values)];
            values[v] = rng.bernoulli(p) ? 1 : 0;
            columns[v][row] = values[v];
        }
    }
    return Dataset::from_columns(binary_variables(cbn.n_vars), std::move(columns), cbn.target);
}

std::pair<Dataset, GroundTruth> generate_pair(int n_predictors, std::int64_t n_samples,
                                              std::uint64_t seed, const SynthConfig& cfg) {
    if (n_predictors < 2) throw DataError("need at least 2 predictor variables");
    if (n_samples < 2 || n_samples % 2 != 0) throw DataError("sample count must be even");

    const int cbn_vars = n_predictors + 1;
    const double edge_prob = cfg.edge_prob > 0.0 ? cfg.edge_prob : 2.0 / (cbn_vars - 1);
    const std::pair<double, double> range{cfg.cpt_lo, cfg.cpt_hi};

    const Cbn cbn0 = random_cbn(cbn_vars, mix_seed(seed, 0), edge_prob, range, cfg.max_parents);
    Cbn cbn1;
    if (cfg.independent_dags) {
        cbn1 = random_cbn(cbn_vars, mix_seed(seed, 1), edge_prob, range, cfg.max_parents);
    } else {
        // shared skeleton, independently re-randomized tables: the same
        // variable can act strongly in one context and weakly in the other
        cbn1 = cbn0;
        Rng rng(mix_seed(seed, 1));
        randomize_cpts(cbn1, rng, range);
    }

    const std::int64_t half = n_samples / 2;
    const Dataset d0 = sample(cbn0, half, mix_seed(seed, 2));
    const Dataset d1 = sample(cbn1, half, mix_seed(seed, 3));

    // layout: X1..Xn predictors, then the context column, then Y
    const int n_cols = n_predictors + 2;
    std::vector<VariableMeta> vars = binary_variables(cbn_vars);
    VariableMeta context;
    context.name = "Xc";
    context.kind = VarKind::Categorical;
    context.labels = {"0", "1"};
    vars.insert(vars.end() - 1, context);

    std::vector<std::int64_t> order(n_samples);
    std::iota(order.begin(), order.end(), 0);
    if (cfg.shuffle) {
        Rng rng(mix_seed(seed, 4));
        for (std::int64_t i = n_samples - 1; i > 0; --i)
            std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }

    std::vector<std::vector<double>> columns(n_cols, std::vector<double>(n_samples));
    for (std::int64_t row = 0; row < n_samples; ++row) {
        const std::int64_t src = order[row];
        const bool second = src >= half;
        const Dataset& part = second ? d1 : d0;
        const std::int64_t part_row = second ? src - half : src;
        for (int v = 0; v < n_predictors; ++v) columns[v][row] = part.value(part_row, v);
        columns[n_predictors][row] = second ? 1.0 : 0.0;
        columns[n_predictors + 1][row] = part.value(part_row, n_predictors);
    }

    GroundTruth truth;
    truth.context_var = "Xc";
    const std::array<const Cbn*, 2> nets{&cbn0, &cbn1};
    for (int v = 0; v < 2; ++v) {
        for (const int p : nets[v]->parents[cbn_vars - 1])
            truth.direct[v].push_back("X" + std::to_string(p + 1));
        truth.ancestors[v] = ancestor_names(*nets[v], binary_variables(cbn_vars));
    }

    Dataset data = Dataset::from_columns(std::move(vars), std::move(columns), n_predictors + 1);
    return {std::move(data), std::move(truth)};
}

}  // namespace ctxcausal
