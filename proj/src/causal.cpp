#include "ctxcausal/causal.hpp"

#include <algorithm>
#include <cmath>

#include "ctxcausal/errors.hpp"
#include "ctxcausal/stats.hpp"

namespace ctxcausal {

namespace {

double sigmoid(double eta) {
    if (eta > 35.0) eta = 35.0;
    if (eta < -35.0) eta = -35.0;
    return 1.0 / (1.0 + std::exp(-eta));
}

// lower-triangular Cholesky solve of (A)x = b for a small SPD matrix
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, int p) {
    for (int j = 0; j < p; ++j) {
        double diag = a[j * p + j];
        for (int k = 0; k < j; ++k) diag -= a[j * p + k] * a[j * p + k];
        if (diag <= 0.0) throw DataError("propensity normal equations not positive definite");
        const double root = std::sqrt(diag);
        a[j * p + j] = root;
        for (int i = j + 1; i < p; ++i) {
            double v = a[i * p + j];
            for (int k = 0; k < j; ++k) v -= a[i * p + k] * a[j * p + k];
            a[i * p + j] = v / root;
        }
    }
    for (int i = 0; i < p; ++i) {  // forward
        double v = b[i];
        for (int k = 0; k < i; ++k) v -= a[i * p + k] * b[k];
        b[i] = v / a[i * p + i];
    }
    for (int i = p - 1; i >= 0; --i) {  // backward
        double v = b[i];
        for (int k = i + 1; k < p; ++k) v -= a[k * p + i] * b[k];
        b[i] = v / a[i * p + i];
    }
    return b;
}

std::vector<PropensityModel::Column> design_columns(const Dataset& d,
                                                    const std::vector<int>& covariates) {
    std::vector<PropensityModel::Column> columns;
    for (const int v : covariates) {
        const auto& meta = d.var(v);
        if (meta.kind == VarKind::Numeric) {
            columns.push_back({v, -1});
        } else {
            for (int c = 1; c < meta.cardinality(); ++c)  // category 0 is the baseline
                columns.push_back({v, c});
        }
    }
    return columns;
}

double feature(const Dataset& d, std::int64_t row, const PropensityModel::Column& col) {
    if (col.category < 0) return d.value(row, col.var);
    return d.category(row, col.var) == col.category ? 1.0 : 0.0;
}

double penalized_nll(const std::vector<double>& eta, const std::vector<char>& treated,
                     const std::vector<double>& coef, double ridge) {
    double nll = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double p = sigmoid(eta[i]);
        nll -= treated[i] ? std::log(std::max(p, 1e-300)) : std::log(std::max(1.0 - p, 1e-300));
    }
    for (const double b : coef) nll += 0.5 * ridge * b * b;
    return nll;
}

}  // namespace

std::vector<int> select_covariates(const Dataset& d, int treatment, const std::set<int>& exclude,
                                   double alpha) {
    std::vector<int> covariates;
    for (int v = 0; v < d.n_vars(); ++v) {
        if (v == treatment || v == d.target() || exclude.count(v)) continue;
        if (stats::association_test(d, v, treatment, alpha) &&
            stats::association_test(d, v, d.target(), alpha))
            covariates.push_back(v);
    }
    return covariates;
}

double PropensityModel::score(const Dataset& d, std::int64_t row) const {
    double eta = coef[0];
    for (std::size_t j = 0; j < columns.size(); ++j) eta += coef[j + 1] * feature(d, row, columns[j]);
    return sigmoid(eta);
}

PropensityModel fit_propensity(const Dataset& d, int treatment, const std::vector<int>& covariates,
                               const CausalParams& params) {
    const std::int64_t n = d.n_rows();
    if (!d.var(treatment).is_binary()) throw DataError("treatment must be binary categorical");

    std::vector<char> treated(n);
    std::int64_t n_treated = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        treated[i] = d.category(i, treatment) == 1;
        n_treated += treated[i];
    }
    if (n_treated == 0 || n_treated == n)
        throw UntestableError("treatment takes a single value; causal test skipped");

    PropensityModel model;
    model.covariates = covariates;
    model.columns = design_columns(d, covariates);
    const int p = static_cast<int>(model.columns.size()) + 1;
    model.coef.assign(p, 0.0);

    if (model.columns.empty()) {
        const double rate = static_cast<double>(n_treated) / static_cast<double>(n);
        model.coef[0] = std::log(rate / (1.0 - rate));
        model.converged = true;
        return model;
    }

    // row-major design matrix with an explicit intercept column
    std::vector<double> x(static_cast<std::size_t>(n) * p);
    for (std::int64_t i = 0; i < n; ++i) {
        x[i * p] = 1.0;
        for (int j = 1; j < p; ++j) x[i * p + j] = feature(d, i, model.columns[j - 1]);
    }

    std::vector<double> eta(n, 0.0), grad(p), hess(static_cast<std::size_t>(p) * p);
    double nll = penalized_nll(eta, treated, model.coef, params.ridge);

    for (int iter = 1; iter <= params.max_iter; ++iter) {
        model.iterations = iter;
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::int64_t i = 0; i < n; ++i) {
            const double pi = sigmoid(eta[i]);
            const double resid = (treated[i] ? 1.0 : 0.0) - pi;
            const double w = std::max(pi * (1.0 - pi), 1e-10);
            const double* row = &x[i * p];
            for (int j = 0; j < p; ++j) {
                grad[j] += resid * row[j];
                for (int k = 0; k <= j; ++k) hess[j * p + k] += w * row[j] * row[k];
            }
        }
        double grad_norm = 0.0;
        for (int j = 0; j < p; ++j) {
            grad[j] -= params.ridge * model.coef[j];
            hess[j * p + j] += params.ridge;
            grad_norm = std::max(grad_norm, std::fabs(grad[j]));
        }
        if (grad_norm <= params.grad_tol) {
            model.converged = true;
            break;
        }

        const std::vector<double> step = cholesky_solve(hess, grad, p);
        // halve the step until the penalized objective improves
        double scale = 1.0;
        for (int half = 0; half < 30; ++half) {
            std::vector<double> trial = model.coef;
            for (int j = 0; j < p; ++j) trial[j] += scale * step[j];
            std::vector<double> trial_eta(n);
            for (std::int64_t i = 0; i < n; ++i) {
                double e = 0.0;
                for (int j = 0; j < p; ++j) e += x[i * p + j] * trial[j];
                trial_eta[i] = e;
            }
            const double trial_nll = penalized_nll(trial_eta, treated, trial, params.ridge);
            // tolerance scales with the objective: near the optimum the true
            // decrease sits below float noise of an O(n) sum
            if (trial_nll <= nll + 1e-10 * (1.0 + std::fabs(nll))) {
                model.coef = std::move(trial);
                eta = std::move(trial_eta);
                nll = trial_nll;
                break;
            }
            scale *= 0.5;
        }
    }
    return model;
}

std::vector<StratumInfo> stratify(const Dataset& d, int treatment,
                                  const std::vector<double>& scores, int n_strata, int min_arm) {
    const std::int64_t n = d.n_rows();
    if (n_strata < 1) throw DataError("stratum count must be at least 1");
    if (min_arm < 1) throw DataError("min_arm must be at least 1");
    if (static_cast<std::int64_t>(scores.size()) != n) throw DataError("score/row count mismatch");

    // empirical quantile cuts; duplicate cuts collapse so tied scores share
    // a stratum
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (int j = 1; j < n_strata; ++j) {
        const double cut = sorted[static_cast<std::size_t>(n) * j / n_strata];
        if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
    }

    const int buckets = static_cast<int>(cuts.size()) + 1;
    std::vector<StratumInfo> all(buckets);
    for (int k = 0; k < buckets; ++k) {
        all[k].lo = k == 0 ? 0.0 : cuts[k - 1];
        all[k].hi = k == buckets - 1 ? 1.0 : cuts[k];
    }
    for (std::int64_t i = 0; i < n; ++i) {
        const int k = static_cast<int>(
            std::upper_bound(cuts.begin(), cuts.end(), scores[i],
                             [](double s, double cut) { return s < cut; }) -
            cuts.begin());
        StratumInfo& stratum = all[k];
        stratum.rows.push_back(i);
        const bool in_treated = d.category(i, treatment) == 1;
        const bool positive = d.y(i) == 1;
        if (in_treated)
            positive ? ++stratum.table.a : ++stratum.table.b;
        else
            positive ? ++stratum.table.c : ++stratum.table.d;
    }

    std::vector<StratumInfo> retained;
    std::int64_t kept_rows = 0;
    for (StratumInfo& stratum : all) {
        if (stratum.rows.empty()) continue;
        const auto& t = stratum.table;
        if (t.a + t.b < min_arm || t.c + t.d < min_arm) continue;
        kept_rows += t.n();
        retained.push_back(std::move(stratum));
    }
    if (retained.empty())
        throw UntestableError("no stratum with both treatment arms populated; no overlap");

    for (StratumInfo& stratum : retained) {
        stratum.weight = static_cast<double>(stratum.table.n()) / static_cast<double>(kept_rows);
        stratum.ace = stratum_ace(stratum.table);
    }
    return retained;
}

double stratum_ace(const ContingencyTable& t) {
    if (t.a + t.b == 0 || t.c + t.d == 0) throw DataError("stratum with an empty treatment arm");
    return static_cast<double>(t.a) / static_cast<double>(t.a + t.b) -
           static_cast<double>(t.c) / static_cast<double>(t.c + t.d);
}

AceResult causal_test_on(const Dataset& sub, int treatment, const std::set<int>& exclude,
                         const CausalParams& params, const std::vector<char>* assoc_y) {
    if (sub.n_rows() == 0) throw UntestableError("context matches no rows");
    if (!sub.var(treatment).is_binary()) throw DataError("treatment must be binary categorical");

    std::vector<int> covariates;
    if (assoc_y) {
        for (int v = 0; v < sub.n_vars(); ++v) {
            if (v == treatment || v == sub.target() || exclude.count(v)) continue;
            if ((*assoc_y)[v] && stats::association_test(sub, v, treatment, params.alpha))
                covariates.push_back(v);
        }
    } else {
        covariates = select_covariates(sub, treatment, exclude, params.alpha);
    }

    const PropensityModel model = fit_propensity(sub, treatment, covariates, params);
    const std::int64_t n = sub.n_rows();
    std::vector<double> scores(n);
    for (std::int64_t i = 0; i < n; ++i) scores[i] = model.score(sub, i);

    AceResult result;
    result.n = n;
    result.covariates = covariates;
    result.strata = stratify(sub, treatment, scores, params.strata, params.min_arm);

    double kept = 0.0;
    for (const StratumInfo& stratum : result.strata) {
        result.ace += stratum.weight * stratum.ace;
        result.treated += stratum.table.a + stratum.table.b;
        result.control += stratum.table.c + stratum.table.d;
        kept += static_cast<double>(stratum.table.n());
    }
    result.dropped_fraction = 1.0 - kept / static_cast<double>(n);
    return result;
}

AceResult causal_test(const Dataset& d, int treatment, const Assignment& ctx,
                      const CausalParams& params) {
    std::set<int> exclude;
    for (const auto& term : ctx) {
        if (term.var == treatment) throw DataError("treatment cannot appear in its own context");
        exclude.insert(term.var);
    }
    return causal_test_on(d.subset(ctx), treatment, exclude, params);
}

}  // namespace ctxcausal
