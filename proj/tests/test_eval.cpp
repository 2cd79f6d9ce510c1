#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctxcausal/eval.hpp"
#include "ctxcausal/rng.hpp"

using namespace ctxcausal;
using eval::EvalOptions;
using eval::Report;
using eval::ScoredRule;

namespace {

GroundTruth make_truth(std::vector<std::string> zero, std::vector<std::string> one) {
    GroundTruth truth;
    truth.context_var = "Xc";
    truth.direct[0] = std::move(zero);
    truth.direct[1] = std::move(one);
    truth.ancestors = truth.direct;
    return truth;
}

ScoredRule pinned(const std::string& treatment, const std::string& value) {
    return {treatment, {{"Xc", value}}};
}

ScoredRule global_rule(const std::string& treatment) { return {treatment, {}}; }

}  // namespace

TEST_CASE("exact match scores ones across the board") {
    const auto truth = make_truth({"B", "C"}, {"B", "C"});
    const std::vector<ScoredRule> rules{pinned("B", "0"), pinned("C", "0"), pinned("B", "1"),
                                        pinned("C", "1")};
    const Report r = eval::evaluate(rules, truth);
    for (int v = 0; v < 2; ++v) {
        CHECK(r.per_context[v].precision == doctest::Approx(1.0));
        CHECK(r.per_context[v].recall == doctest::Approx(1.0));
        CHECK(r.per_context[v].f1 == doctest::Approx(1.0));
    }
    CHECK(r.pooled.f1 == doctest::Approx(1.0));
}

TEST_CASE("half overlap scores one half everywhere") {
    const auto truth = make_truth({"B", "C"}, {});
    GroundTruth t = truth;
    t.direct[1].clear();
    t.ancestors[0] = t.direct[0];  // no extra ancestor credit
    const std::vector<ScoredRule> rules{pinned("A", "0"), pinned("B", "0")};
    const Report r = eval::evaluate(rules, t);
    CHECK(r.per_context[0].precision == doctest::Approx(0.5));
    CHECK(r.per_context[0].recall == doctest::Approx(0.5));
    CHECK(r.per_context[0].f1 == doctest::Approx(0.5));
}

TEST_CASE("f1 is the exact harmonic mean and bounded by max(P, R)") {
    Rng rng(3);
    const std::vector<std::string> universe{"A", "B", "C", "D", "E", "F"};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> truth_names, pred_names;
        for (const auto& name : universe) {
            if (rng.bernoulli(0.5)) truth_names.push_back(name);
            if (rng.bernoulli(0.5)) pred_names.push_back(name);
        }
        if (truth_names.empty()) continue;
        GroundTruth truth = make_truth(truth_names, truth_names);
        std::vector<ScoredRule> rules;
        for (const auto& name : pred_names) rules.push_back(pinned(name, "0"));
        const Report r = eval::evaluate(rules, truth, {true});
        const auto& m = r.per_context[0];
        if (m.precision + m.recall > 0.0) {
            const double harmonic = 2.0 * m.precision * m.recall / (m.precision + m.recall);
            CHECK(std::fabs(m.f1 - harmonic) <= 1e-12);
        } else {
            CHECK(m.f1 == doctest::Approx(0.0));
        }
        CHECK(m.f1 <= std::max(m.precision, m.recall) + 1e-12);
    }
}

TEST_CASE("metrics are invariant under rule reordering") {
    const auto truth = make_truth({"A", "B"}, {"C"});
    std::vector<ScoredRule> rules{pinned("A", "0"), pinned("C", "1"), global_rule("B"),
                                  pinned("D", "1")};
    const Report a = eval::evaluate(rules, truth);
    std::reverse(rules.begin(), rules.end());
    const Report b = eval::evaluate(rules, truth);
    for (int v = 0; v < 2; ++v) {
        CHECK(a.per_context[v].precision == b.per_context[v].precision);
        CHECK(a.per_context[v].recall == b.per_context[v].recall);
        CHECK(a.per_context[v].f1 == b.per_context[v].f1);
    }
    CHECK(a.pooled.f1 == b.pooled.f1);
}

TEST_CASE("lenient credits global rules in both contexts, strict in neither") {
    const auto truth = make_truth({"A"}, {"A"});
    const std::vector<ScoredRule> rules{global_rule("A")};
    const Report lenient = eval::evaluate(rules, truth, {false});
    CHECK(lenient.per_context[0].recall == doctest::Approx(1.0));
    CHECK(lenient.per_context[1].recall == doctest::Approx(1.0));
    const Report strict = eval::evaluate(rules, truth, {true});
    CHECK(strict.per_context[0].recall == doctest::Approx(0.0));
    CHECK(strict.per_context[1].recall == doctest::Approx(0.0));
    CHECK(strict.per_context[0].n_pred == 0);
}

TEST_CASE("rules pinned to the other context value never cross over") {
    const auto truth = make_truth({"A"}, {"A"});
    const std::vector<ScoredRule> rules{pinned("A", "1")};
    const Report r = eval::evaluate(rules, truth);
    CHECK(r.per_context[0].n_pred == 0);
    CHECK(r.per_context[1].recall == doctest::Approx(1.0));
}

TEST_CASE("rules silent on the context variable count in both under lenient") {
    const auto truth = make_truth({"A"}, {"A"});
    const std::vector<ScoredRule> rules{{"A", {{"B", "1"}}}};
    const Report r = eval::evaluate(rules, truth);
    CHECK(r.per_context[0].recall == doctest::Approx(1.0));
    CHECK(r.per_context[1].recall == doctest::Approx(1.0));
    const Report strict = eval::evaluate(rules, truth, {true});
    CHECK(strict.per_context[0].n_pred == 0);
}

TEST_CASE("empty truth makes recall undefined but precision still scores") {
    GroundTruth truth = make_truth({"A"}, {});
    truth.ancestors[1].clear();
    const std::vector<ScoredRule> rules{pinned("B", "1")};
    const Report r = eval::evaluate(rules, truth);
    CHECK_FALSE(r.per_context[1].recall_defined);
    CHECK(r.per_context[1].precision == doctest::Approx(0.0));
    CHECK(r.per_context[0].precision == doctest::Approx(1.0));  // nothing predicted there
}

TEST_CASE("ancestor hits are credited in precision but not recall under lenient") {
    GroundTruth truth = make_truth({"A"}, {"A"});
    truth.ancestors[0] = {"A", "I"};  // I is an indirect ancestor
    const std::vector<ScoredRule> rules{pinned("A", "0"), pinned("I", "0")};
    const Report lenient = eval::evaluate(rules, truth);
    CHECK(lenient.per_context[0].precision == doctest::Approx(1.0));
    CHECK(lenient.per_context[0].recall == doctest::Approx(1.0));
    CHECK(lenient.per_context[0].tp == 1);
    CHECK(lenient.per_context[0].credited == 2);
    const Report strict = eval::evaluate(rules, truth, {true});
    CHECK(strict.per_context[0].precision == doctest::Approx(0.5));
}

TEST_CASE("pooled micro metrics respect the context pairing") {
    // A is a cause only in context 0; predicting it in context 1 is a miss
    GroundTruth truth = make_truth({"A"}, {"B"});
    truth.ancestors = truth.direct;
    const std::vector<ScoredRule> rules{pinned("A", "0"), pinned("A", "1")};
    const Report r = eval::evaluate(rules, truth, {true});
    CHECK(r.pooled.tp == 1);
    CHECK(r.pooled.n_pred == 2);
    CHECK(r.pooled.precision == doctest::Approx(0.5));
    CHECK(r.pooled.recall == doctest::Approx(0.5));
}
