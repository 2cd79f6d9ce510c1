#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctxcausal/dataset.hpp"

namespace ctxcausal {

// Random DAG in topological id order plus per-variable tables
// P(v = 1 | parent configuration). The target is always the last variable
// and always has at least one parent.
struct Cbn {
    int n_vars = 0;
    std::vector<std::vector<int>> parents;  // ascending ids per variable
    std::vector<std::vector<double>> cpt;   // 2^|parents| entries per variable
    int target = 0;

    friend bool operator==(const Cbn&, const Cbn&) = default;
};

// Per context value, the variables that cause the target in the matching
// network: direct parents, plus the full ancestor closure for lenient
// scoring.
struct GroundTruth {
    std::string context_var = "Xc";
    std::array<std::vector<std::string>, 2> direct;
    std::array<std::vector<std::string>, 2> ancestors;
};

struct SynthConfig {
    double edge_prob = 0.0;  // 0 = auto: 2 / (cbn vars - 1)
    double cpt_lo = 0.1, cpt_hi = 0.9;
    int max_parents = 4;
    bool independent_dags = false;  // default: shared skeleton, fresh CPTs
    bool shuffle = false;           // seeded row shuffle of the stacked result
};

// Each ordered pair (i < j) receives an edge with probability edge_prob,
// parents capped at max_parents; an edge into the last variable is forced
// when none was drawn. CPT entries are uniform over cpt_range.
Cbn random_cbn(int n_vars, std::uint64_t seed, double edge_prob,
               std::pair<double, double> cpt_range, int max_parents = 4);

// Ancestral sampling in id order; binary variables named X1..X{n-1} and Y.
Dataset sample(const Cbn& cbn, std::int64_t n, std::uint64_t seed);

// Two networks over the same variables and target, n_samples/2 rows sampled
// from each, a context column Xc (0 for the first half, 1 for the second)
// appended, and the halves stacked. n_samples must be even.
std::pair<Dataset, GroundTruth> generate_pair(int n_predictors, std::int64_t n_samples,
                                              std::uint64_t seed, const SynthConfig& cfg = {});

}  // namespace ctxcausal
