// Generative fixtures with known causal structure, shared by unit and
// acceptance suites.
#pragma once

#include <string>
#include <vector>

#include "ctxcausal/dataset.hpp"
#include "ctxcausal/rng.hpp"

namespace fixtures {

inline ctxcausal::VariableMeta binary_var(const std::string& name) {
    return {name, ctxcausal::VarKind::Categorical, {"0", "1"}, -1};
}

// Confounded structure with analytic ACE 0.4:
//   C ~ B(0.5); X ~ B(0.8) if C else B(0.2)
//   P(Y=1 | X, C) = 0.2 + 0.4 X + 0.3 C
// The naive difference converges to 0.58 (bias +0.18).
inline ctxcausal::Dataset confounded(std::int64_t n, std::uint64_t seed, int n_noise = 2) {
    ctxcausal::Rng rng(seed);
    std::vector<ctxcausal::VariableMeta> vars{binary_var("X"), binary_var("C")};
    for (int u = 0; u < n_noise; ++u) vars.push_back(binary_var("U" + std::to_string(u + 1)));
    vars.push_back(binary_var("Y"));
    std::vector<std::vector<double>> cols(vars.size(), std::vector<double>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const int c = rng.bernoulli(0.5);
        const int x = rng.bernoulli(c ? 0.8 : 0.2);
        cols[0][i] = x;
        cols[1][i] = c;
        for (int u = 0; u < n_noise; ++u) cols[2 + u][i] = rng.bernoulli(0.5);
        cols[vars.size() - 1][i] = rng.bernoulli(0.2 + 0.4 * x + 0.3 * c);
    }
    return ctxcausal::Dataset::from_columns(vars, cols, static_cast<int>(vars.size()) - 1);
}

// X independent of everything, P(Y=1) = 0.6 if X else 0.2: analytic ACE 0.4
// with no confounding.
inline ctxcausal::Dataset unconfounded(std::int64_t n, std::uint64_t seed, int n_noise = 2) {
    ctxcausal::Rng rng(seed);
    std::vector<ctxcausal::VariableMeta> vars{binary_var("X")};
    for (int u = 0; u < n_noise; ++u) vars.push_back(binary_var("U" + std::to_string(u + 1)));
    vars.push_back(binary_var("Y"));
    std::vector<std::vector<double>> cols(vars.size(), std::vector<double>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const int x = rng.bernoulli(0.5);
        cols[0][i] = x;
        for (int u = 0; u < n_noise; ++u) cols[1 + u][i] = rng.bernoulli(0.5);
        cols[vars.size() - 1][i] = rng.bernoulli(x ? 0.6 : 0.2);
    }
    return ctxcausal::Dataset::from_columns(vars, cols, static_cast<int>(vars.size()) - 1);
}

// Opposite context effects with a flat global effect:
//   P(Y=1 | Xp, Xc=1) = 0.8 / 0.3   (effect +0.5)
//   P(Y=1 | Xp, Xc=0) = 0.2 / 0.7   (effect -0.5)
// Globally P(Y=1|Xp=1) = P(Y=1|Xp=0) = 0.5, and the context variable's own
// effect is 0.55 - 0.45 = 0.1.
inline ctxcausal::Dataset opposite_effects(std::int64_t n, std::uint64_t seed, int n_noise = 3) {
    ctxcausal::Rng rng(seed);
    std::vector<ctxcausal::VariableMeta> vars{binary_var("Xp"), binary_var("Xc")};
    for (int u = 0; u < n_noise; ++u) vars.push_back(binary_var("U" + std::to_string(u + 1)));
    vars.push_back(binary_var("Y"));
    std::vector<std::vector<double>> cols(vars.size(), std::vector<double>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const int xp = rng.bernoulli(0.5);
        const int xc = rng.bernoulli(0.5);
        cols[0][i] = xp;
        cols[1][i] = xc;
        for (int u = 0; u < n_noise; ++u) cols[2 + u][i] = rng.bernoulli(0.5);
        const double p = xc ? (xp ? 0.8 : 0.3) : (xp ? 0.2 : 0.7);
        cols[vars.size() - 1][i] = rng.bernoulli(p);
    }
    return ctxcausal::Dataset::from_columns(vars, cols, static_cast<int>(vars.size()) - 1);
}

// 50 columns, 10K-scale rows: three 15-variable signal tiers plus 4 noise
// columns. Within a tier every variable shifts P(Y=1) by the same amount,
// across tiers the shifts step down clearly, so the first tree mines the
// top tier, the next tree the second, and so on: a multi-tree run's
// workload scales with the tree count instead of collapsing after one tree.
inline ctxcausal::Dataset balanced_signal(std::int64_t n, std::uint64_t seed) {
    constexpr int kTierSize = 15, kNoise = 4;
    constexpr double kTierShift[3] = {0.048, 0.042, 0.037};
    constexpr int kSignal = 3 * kTierSize;
    ctxcausal::Rng rng(seed);
    std::vector<ctxcausal::VariableMeta> vars;
    for (int i = 0; i < kSignal; ++i) vars.push_back(binary_var("S" + std::to_string(i + 1)));
    for (int i = 0; i < kNoise; ++i) vars.push_back(binary_var("U" + std::to_string(i + 1)));
    vars.push_back(binary_var("Y"));
    std::vector<std::vector<double>> cols(vars.size(), std::vector<double>(n));
    for (std::int64_t r = 0; r < n; ++r) {
        double shift = 0.0;
        for (int i = 0; i < kSignal; ++i) {
            const int x = rng.bernoulli(0.5);
            cols[i][r] = x;
            shift += kTierShift[i / kTierSize] * (2 * x - 1);
        }
        for (int i = 0; i < kNoise; ++i) cols[kSignal + i][r] = rng.bernoulli(0.5);
        const double p = std::min(0.95, std::max(0.05, 0.5 + shift));
        cols[vars.size() - 1][r] = rng.bernoulli(p);
    }
    return ctxcausal::Dataset::from_columns(vars, cols, static_cast<int>(vars.size()) - 1);
}

// One dominant unconditional cause Xg (effect 0.6) plus weaker structure so
// trees have paths to enumerate.
inline ctxcausal::Dataset global_cause(std::int64_t n, std::uint64_t seed, int n_noise = 3) {
    ctxcausal::Rng rng(seed);
    std::vector<ctxcausal::VariableMeta> vars{binary_var("Xg"), binary_var("A")};
    for (int u = 0; u < n_noise; ++u) vars.push_back(binary_var("U" + std::to_string(u + 1)));
    vars.push_back(binary_var("Y"));
    std::vector<std::vector<double>> cols(vars.size(), std::vector<double>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const int xg = rng.bernoulli(0.5);
        const int a = rng.bernoulli(0.5);
        cols[0][i] = xg;
        cols[1][i] = a;
        for (int u = 0; u < n_noise; ++u) cols[2 + u][i] = rng.bernoulli(0.5);
        const double p = 0.15 + 0.6 * xg + 0.1 * a;
        cols[vars.size() - 1][i] = rng.bernoulli(p);
    }
    return ctxcausal::Dataset::from_columns(vars, cols, static_cast<int>(vars.size()) - 1);
}

}  // namespace fixtures
