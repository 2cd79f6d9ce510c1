#include "ctxcausal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ctxcausal/errors.hpp"

namespace ctxcausal::stats {

namespace {

double log_factorial(std::int64_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// log P of one table with the given cells under fixed margins
double log_table_prob(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    const std::int64_t n = a + b + c + d;
    return log_factorial(a + b) + log_factorial(c + d) + log_factorial(a + c) +
           log_factorial(b + d) - log_factorial(n) - log_factorial(a) - log_factorial(b) -
           log_factorial(c) - log_factorial(d);
}

double clamp_probability(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

double fisher_exact_p(const ContingencyTable& t, FisherTail tail) {
    if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0) throw DataError("negative contingency count");
    if (t.n() == 0) return 1.0;

    // walk the distribution from the observed table with the exact term
    // ratio P(i+1)/P(i); one log-gamma evaluation total instead of one per
    // table
    const double observed = std::exp(log_table_prob(t.a, t.b, t.c, t.d));

    if (tail == FisherTail::Upper) {
        const std::int64_t steps = std::min(t.b, t.c);
        if (observed == 0.0) {
            // the observed point probability underflowed; the tail can still
            // be large, so accumulate in log space
            double log_term = log_table_prob(t.a, t.b, t.c, t.d);
            double log_sum = log_term;
            for (std::int64_t i = 0; i < steps; ++i) {
                log_term += std::log(static_cast<double>(t.b - i)) +
                            std::log(static_cast<double>(t.c - i)) -
                            std::log(static_cast<double>(t.a + i + 1)) -
                            std::log(static_cast<double>(t.d + i + 1));
                const double hi = std::max(log_sum, log_term);
                log_sum = hi + std::log1p(std::exp(std::min(log_sum, log_term) - hi));
            }
            return clamp_probability(std::exp(log_sum));
        }
        double p = observed, term = observed;
        for (std::int64_t i = 0; i < steps; ++i) {
            term *= static_cast<double>(t.b - i) * static_cast<double>(t.c - i) /
                    (static_cast<double>(t.a + i + 1) * static_cast<double>(t.d + i + 1));
            p += term;
        }
        return clamp_probability(p);
    }

    // two-sided: sum every table (for the observed margins) whose point
    // probability does not exceed the observed one
    const double cutoff = observed * (1.0 + 1e-7);
    double p = observed, term = observed;
    for (std::int64_t i = 0; i < std::min(t.b, t.c); ++i) {  // toward larger a
        term *= static_cast<double>(t.b - i) * static_cast<double>(t.c - i) /
                (static_cast<double>(t.a + i + 1) * static_cast<double>(t.d + i + 1));
        if (term <= cutoff) p += term;
    }
    term = observed;
    for (std::int64_t i = 0; i < std::min(t.a, t.d); ++i) {  // toward smaller a
        term *= static_cast<double>(t.a - i) * static_cast<double>(t.d - i) /
                (static_cast<double>(t.b + i + 1) * static_cast<double>(t.c + i + 1));
        if (term <= cutoff) p += term;
    }
    return clamp_probability(p);
}

double fisher_oriented_p(const ContingencyTable& t) {
    // swap rows when the control arm has the larger Y=1 rate:
    // a/(a+b) < c/(c+d)  <=>  a(c+d) < c(a+b)
    if (t.a * (t.c + t.d) < t.c * (t.a + t.b))
        return fisher_exact_p({t.c, t.d, t.a, t.b});
    return fisher_exact_p(t);
}

double confidence(const Dataset& d, const Assignment& antecedent, int target_value) {
    std::int64_t support = 0, hits = 0;
    const std::int64_t n = d.n_rows();
    for (std::int64_t i = 0; i < n; ++i) {
        if (!d.matches(i, antecedent)) continue;
        ++support;
        if (d.y(i) == target_value) ++hits;
    }
    if (support == 0) throw DataError("antecedent matches no rows; rule must be discarded");
    return static_cast<double>(hits) / static_cast<double>(support);
}

namespace {

// category codes for association testing; numerics binarized at the median
std::vector<int> categorize(const Dataset& d, int var, int& cardinality) {
    const std::int64_t n = d.n_rows();
    std::vector<int> codes(n);
    const auto& meta = d.var(var);
    if (meta.kind == VarKind::Categorical) {
        for (std::int64_t i = 0; i < n; ++i) codes[i] = d.category(i, var);
        cardinality = meta.cardinality();
    } else {
        std::vector<double> values(n);
        for (std::int64_t i = 0; i < n; ++i) values[i] = d.value(i, var);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[(n - 1) / 2];
        for (std::int64_t i = 0; i < n; ++i) codes[i] = values[i] <= median ? 0 : 1;
        cardinality = 2;
    }
    return codes;
}

}  // namespace

bool association_test(const Dataset& d, int var_a, int var_b, double alpha) {
    if (var_a == var_b) throw DataError("association test needs two distinct variables");
    const std::int64_t n = d.n_rows();
    if (n == 0) return false;

    int card_a = 0, card_b = 0;
    const std::vector<int> a = categorize(d, var_a, card_a);
    const std::vector<int> b = categorize(d, var_b, card_b);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(card_a) * card_b, 0);
    for (std::int64_t i = 0; i < n; ++i) ++counts[a[i] * card_b + b[i]];

    // observed (non-empty) rows and columns only
    std::vector<int> rows, cols;
    for (int r = 0; r < card_a; ++r) {
        std::int64_t total = 0;
        for (int c = 0; c < card_b; ++c) total += counts[r * card_b + c];
        if (total > 0) rows.push_back(r);
    }
    for (int c = 0; c < card_b; ++c) {
        std::int64_t total = 0;
        for (int r = 0; r < card_a; ++r) total += counts[r * card_b + c];
        if (total > 0) cols.push_back(c);
    }
    if (rows.size() < 2 || cols.size() < 2) return false;  // degenerate variable

    if (rows.size() == 2 && cols.size() == 2) {
        ContingencyTable t{counts[rows[1] * card_b + cols[1]], counts[rows[1] * card_b + cols[0]],
                           counts[rows[0] * card_b + cols[1]], counts[rows[0] * card_b + cols[0]]};
        return fisher_exact_p(t, FisherTail::TwoSided) <= alpha;
    }

    std::vector<std::int64_t> row_tot(rows.size(), 0), col_tot(cols.size(), 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const std::int64_t v = counts[rows[r] * card_b + cols[c]];
            row_tot[r] += v;
            col_tot[c] += v;
        }
    double stat = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double expected = static_cast<double>(row_tot[r]) * col_tot[c] / n;
            const double observed = static_cast<double>(counts[rows[r] * card_b + cols[c]]);
            stat += (observed - expected) * (observed - expected) / expected;
        }
    const int df = static_cast<int>((rows.size() - 1) * (cols.size() - 1));
    return chi_squared_sf(stat, df) <= alpha;
}

namespace {

// regularized lower incomplete gamma by series expansion (x < a + 1)
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// regularized upper incomplete gamma by Lentz continued fraction (x >= a + 1)
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw DataError("gamma_q domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_squared_sf(double x, int df) {
    if (df < 1) throw DataError("chi-squared needs df >= 1");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

namespace {

double entropy_bits(const std::array<std::int64_t, 2>& counts) {
    const double n = static_cast<double>(counts[0] + counts[1]);
    if (n == 0.0) return 0.0;
    double h = 0.0;
    for (const std::int64_t k : counts) {
        if (k == 0) continue;
        const double p = static_cast<double>(k) / n;
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

SplitScore split_score_from_counts(const std::vector<std::array<std::int64_t, 2>>& children) {
    std::array<std::int64_t, 2> parent{0, 0};
    std::int64_t total = 0;
    int non_empty = 0;
    for (const auto& child : children) {
        parent[0] += child[0];
        parent[1] += child[1];
        const std::int64_t n = child[0] + child[1];
        total += n;
        if (n > 0) ++non_empty;
    }
    if (total == 0 || non_empty < 2) return {};

    double weighted = 0.0, split_info = 0.0;
    for (const auto& child : children) {
        const std::int64_t n = child[0] + child[1];
        if (n == 0) continue;
        const double frac = static_cast<double>(n) / static_cast<double>(total);
        weighted += frac * entropy_bits(child);
        split_info -= frac * std::log2(frac);
    }
    SplitScore score;
    score.gain = entropy_bits(parent) - weighted;
    score.ratio = split_info > 0.0 ? score.gain / split_info : 0.0;
    return score;
}

double gain_ratio(const Dataset& d, const Split& split) {
    const auto& meta = d.var(split.var);
    std::vector<std::array<std::int64_t, 2>> children;
    if (split.numeric) {
        if (meta.kind != VarKind::Numeric) throw DataError("numeric split on categorical variable");
        children.assign(2, {0, 0});
        const std::int64_t n = d.n_rows();
        for (std::int64_t i = 0; i < n; ++i) {
            const int side = d.value(i, split.var) <= split.threshold ? 0 : 1;
            ++children[side][d.y(i)];
        }
    } else {
        if (meta.kind != VarKind::Categorical) throw DataError("categorical split on numeric variable");
        children.assign(meta.cardinality(), {0, 0});
        const std::int64_t n = d.n_rows();
        for (std::int64_t i = 0; i < n; ++i) ++children[d.category(i, split.var)][d.y(i)];
    }
    return split_score_from_counts(children).ratio;
}

}  // namespace ctxcausal::stats
