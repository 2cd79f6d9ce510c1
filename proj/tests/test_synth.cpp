#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctxcausal/synth.hpp"
#include "ctxcausal/tcc.hpp"

using namespace ctxcausal;

namespace {

// X1 -> X2 with a copying CPT, Y depends on X2
Cbn chain_cbn(double copy_hi, double copy_lo) {
    Cbn cbn;
    cbn.n_vars = 3;
    cbn.target = 2;
    cbn.parents = {{}, {0}, {1}};
    cbn.cpt = {{0.5}, {copy_lo, copy_hi}, {0.3, 0.7}};
    return cbn;
}

}  // namespace

TEST_CASE("random networks are reproducible bit for bit") {
    const Cbn a = random_cbn(10, 1, 0.25, {0.1, 0.9});
    const Cbn b = random_cbn(10, 1, 0.25, {0.1, 0.9});
    CHECK(a == b);
    const Cbn c = random_cbn(10, 2, 0.25, {0.1, 0.9});
    CHECK_FALSE(a == c);
}

TEST_CASE("edge probability near one saturates the parent cap") {
    const Cbn cbn = random_cbn(10, 3, 0.999, {0.1, 0.9}, 4);
    for (int v = 0; v < 10; ++v)
        CHECK(static_cast<int>(cbn.parents[v].size()) == std::min(v, 4));
}

TEST_CASE("the target always has at least one parent") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Cbn cbn = random_cbn(5, seed, 0.05, {0.1, 0.9});
        CHECK(cbn.parents[cbn.target].size() >= 1);
    }
}

TEST_CASE("target in-degree matches the binomial expectation") {
    // 9 candidate parents at p = 2/9: expectation 2, cap and the forced
    // edge shift it only slightly
    double total = 0.0;
    const int n_seeds = 1000;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const Cbn cbn = random_cbn(10, 20000 + seed, 2.0 / 9.0, {0.1, 0.9});
        total += static_cast<double>(cbn.parents[cbn.target].size());
    }
    const double mean = total / n_seeds;
    CHECK(mean >= 1.5);
    CHECK(mean <= 2.5);
}

TEST_CASE("a deterministic copy edge propagates exactly") {
    const Dataset d = sample(chain_cbn(1.0, 0.0), 500, 11);
    for (std::int64_t i = 0; i < d.n_rows(); ++i) CHECK(d.value(i, 0) == d.value(i, 1));
}

TEST_CASE("root frequencies stay inside the 3-sigma binomial band") {
    const Dataset d = sample(chain_cbn(0.9, 0.1), 10000, 13);
    double mean = 0.0;
    for (std::int64_t i = 0; i < d.n_rows(); ++i) mean += d.value(i, 0);
    mean /= static_cast<double>(d.n_rows());
    CHECK(mean >= 0.47);
    CHECK(mean <= 0.53);
}

TEST_CASE("two networks sharing a DAG reproduce their own tables") {
    const Cbn first = chain_cbn(0.9, 0.2);
    const Cbn second = chain_cbn(0.4, 0.6);
    for (const Cbn& cbn : {first, second}) {
        const Dataset d = sample(cbn, 20000, 17);
        // estimate P(X2=1 | X1) and compare against the table
        for (const int parent_value : {0, 1}) {
            std::int64_t count = 0, hits = 0;
            for (std::int64_t i = 0; i < d.n_rows(); ++i) {
                if (static_cast<int>(d.value(i, 0)) != parent_value) continue;
                ++count;
                hits += static_cast<int>(d.value(i, 1));
            }
            const double want = cbn.cpt[1][parent_value];
            const double got = static_cast<double>(hits) / static_cast<double>(count);
            const double sigma = std::sqrt(want * (1.0 - want) / static_cast<double>(count));
            CHECK(std::fabs(got - want) <= 3.0 * sigma);
        }
    }
}

TEST_CASE("generate_pair layout: predictors, context column, target") {
    const auto [d, truth] = generate_pair(10, 1000, 19);
    CHECK(d.n_vars() == 12);
    CHECK(d.n_rows() == 1000);
    CHECK(d.var(10).name == "Xc");
    CHECK(d.var(11).name == "Y");
    CHECK(d.target() == 11);
    CHECK(truth.context_var == "Xc");
    for (int v = 0; v < 2; ++v) {
        CHECK_FALSE(truth.direct[v].empty());
        for (const auto& name : truth.direct[v]) {
            CHECK(name != "Xc");
            CHECK(name != "Y");
            // direct causes are contained in the ancestor closure
            CHECK(std::count(truth.ancestors[v].begin(), truth.ancestors[v].end(), name) == 1);
        }
    }
}

TEST_CASE("the context column is 0 then 1 across the stacked halves") {
    const auto [d, truth] = generate_pair(5, 600, 23);
    (void)truth;
    const int xc = *d.var_id("Xc");
    for (std::int64_t i = 0; i < 300; ++i) CHECK(d.value(i, xc) == 0.0);
    for (std::int64_t i = 300; i < 600; ++i) CHECK(d.value(i, xc) == 1.0);
    CHECK(d.subset({{xc, {Op::Eq, 0.0}}}).n_rows() == 300);
}

TEST_CASE("generation is deterministic per seed") {
    const auto [a, ta] = generate_pair(6, 400, 29);
    const auto [b, tb] = generate_pair(6, 400, 29);
    REQUIRE(a.n_rows() == b.n_rows());
    for (std::int64_t i = 0; i < a.n_rows(); ++i)
        for (int v = 0; v < a.n_vars(); ++v) CHECK(a.value(i, v) == b.value(i, v));
    CHECK(ta.direct == tb.direct);
    CHECK(ta.ancestors == tb.ancestors);
}

TEST_CASE("the seeded shuffle preserves row contents") {
    SynthConfig cfg;
    const auto [plain, t1] = generate_pair(4, 200, 31, cfg);
    cfg.shuffle = true;
    const auto [shuffled, t2] = generate_pair(4, 200, 31, cfg);
    (void)t1;
    (void)t2;
    const auto rows_of = [](const Dataset& d) {
        std::vector<std::vector<double>> rows;
        for (std::int64_t i = 0; i < d.n_rows(); ++i) {
            std::vector<double> row;
            for (int v = 0; v < d.n_vars(); ++v) row.push_back(d.value(i, v));
            rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end());
        return rows;
    };
    CHECK(rows_of(plain) == rows_of(shuffled));
}

TEST_CASE("independent-dag mode still shares the variable set and target") {
    SynthConfig cfg;
    cfg.independent_dags = true;
    const auto [d, truth] = generate_pair(8, 400, 37, cfg);
    CHECK(d.n_vars() == 10);
    CHECK_FALSE(truth.direct[0].empty());
    CHECK_FALSE(truth.direct[1].empty());
}

TEST_CASE("benchmark replicas feed discovery end to end") {
    int nonempty = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto [d, truth] = generate_pair(10, 10000, seed);
        (void)truth;
        TccParams params;
        params.workers = 2;
        const DiscoveryResult result = discover(d, params);
        nonempty += !result.rules.empty();
    }
    CHECK(nonempty >= 9);
}
