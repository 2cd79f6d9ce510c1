#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ctxcausal/dataset.hpp"

namespace ctxcausal::stats {

enum class FisherTail {
    Upper,     // sum over tables [a+i, b-i; c-i, d+i], i = 0..min(b,c)
    TwoSided,  // sum of all tables with point probability <= observed
};

// Exact test probability for a 2x2 table, computed in log space via
// log-gamma. Degenerate tables (an empty margin) yield p = 1.
double fisher_exact_p(const ContingencyTable& t, FisherTail tail = FisherTail::Upper);

// Upper-tail p after orienting the table so the first row carries the larger
// Y=1 proportion; direction-free significance for branch pruning.
double fisher_oriented_p(const ContingencyTable& t);

// Fraction of antecedent-matching rows whose target equals target_value.
// Throws DataError when the antecedent matches no rows.
double confidence(const Dataset& d, const Assignment& antecedent, int target_value);

// True iff the independence null for the two variables is rejected at level
// alpha. Numeric variables are binarized at their median first; 2x2 tables
// use the exact test, larger ones the chi-squared statistic. A variable with
// a single observed value cannot be associated and yields false.
bool association_test(const Dataset& d, int var_a, int var_b, double alpha);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
// Chi-squared survival function, Q(df/2, x/2).
double chi_squared_sf(double x, int df);

// Candidate split: multiway over categories, or binary <=/> at a numeric
// threshold (left child takes value <= threshold).
struct Split {
    int var = -1;
    bool numeric = false;
    double threshold = 0.0;
};

struct SplitScore {
    double gain = 0.0;   // information gain on the target, bits
    double ratio = 0.0;  // gain / split information; 0 when split info is 0
};

// Entropy arithmetic over per-child class counts; children with zero rows
// contribute nothing.
SplitScore split_score_from_counts(const std::vector<std::array<std::int64_t, 2>>& children);

double gain_ratio(const Dataset& d, const Split& split);

}  // namespace ctxcausal::stats
