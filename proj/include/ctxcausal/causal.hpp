#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "ctxcausal/dataset.hpp"

namespace ctxcausal {

struct CausalParams {
    int strata = 5;
    int min_arm = 5;
    double alpha = 0.05;  // covariate association level
    double ridge = 1e-6;
    int max_iter = 100;
    double grad_tol = 1e-8;
};

// Logistic model of treatment on one-hot-encoded covariates. Categorical
// covariates contribute one indicator per non-baseline category, numerics
// enter identically.
struct PropensityModel {
    struct Column {
        int var = -1;
        int category = -1;  // -1 marks a numeric identity column
    };

    std::vector<int> covariates;
    std::vector<Column> columns;
    std::vector<double> coef;  // [0] intercept, then one per column
    bool converged = false;
    int iterations = 0;

    double score(const Dataset& d, std::int64_t row) const;
};

struct StratumInfo {
    std::vector<std::int64_t> rows;
    double lo = 0.0, hi = 1.0;  // propensity range [lo, hi)
    ContingencyTable table;
    double weight = 0.0;  // renormalized over retained strata
    double ace = 0.0;
};

struct AceResult {
    double ace = 0.0;
    std::vector<StratumInfo> strata;  // retained strata only
    double dropped_fraction = 0.0;    // share of rows in discarded strata
    std::int64_t treated = 0, control = 0;
    std::int64_t n = 0;
    std::vector<int> covariates;
};

// Every variable outside {treatment, target} + exclude that is associated
// with both the treatment and the target at level alpha, ascending id.
// `exclude` carries the context variables: constant in the subset, they must
// not enter the model.
std::vector<int> select_covariates(const Dataset& d, int treatment,
                                   const std::set<int>& exclude, double alpha);

// Ridge-penalized maximum likelihood by Newton iteration. An empty covariate
// set yields the intercept-only model (constant score = treated fraction).
// Throws UntestableError when the treatment has a single class.
PropensityModel fit_propensity(const Dataset& d, int treatment,
                               const std::vector<int>& covariates,
                               const CausalParams& params = {});

// Cuts rows at empirical score quantiles into n_strata groups; groups with
// fewer than min_arm treated or control rows are dropped and the remaining
// weights renormalized. Throws UntestableError when nothing is retained.
std::vector<StratumInfo> stratify(const Dataset& d, int treatment,
                                  const std::vector<double>& scores, int n_strata, int min_arm);

// a/(a+b) - c/(c+d); throws DataError on an empty arm.
double stratum_ace(const ContingencyTable& t);

// Full pipeline: subset -> covariate selection -> propensity -> strata ->
// weighted stratum effects. Throws UntestableError for candidates that
// cannot be evaluated (empty context, single-class treatment, no overlap).
AceResult causal_test(const Dataset& d, int treatment, const Assignment& ctx,
                      const CausalParams& params = {});

// Same pipeline on a pre-built subset. assoc_y, when given, caches
// association_test(v, target) per variable of `sub` so repeated treatments
// within one context share the work.
AceResult causal_test_on(const Dataset& sub, int treatment, const std::set<int>& exclude,
                         const CausalParams& params, const std::vector<char>* assoc_y = nullptr);

}  // namespace ctxcausal
