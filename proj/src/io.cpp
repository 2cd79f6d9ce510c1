#include "ctxcausal/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ctxcausal/errors.hpp"

namespace ctxcausal::io {

namespace {

const char* op_name(Op op) {
    switch (op) {
        case Op::Eq: return "eq";
        case Op::Le: return "le";
        case Op::Gt: return "gt";
    }
    return "?";
}

json condition_json(const DiscoveryResult& result, const VarCondition& term) {
    const VariableMeta& meta = result.variables.at(term.var);
    json j;
    j["var"] = meta.name;
    j["op"] = op_name(term.cond.op);
    if (term.cond.op == Op::Eq)
        j["value"] = meta.labels.at(static_cast<std::size_t>(term.cond.value));
    else
        j["value"] = term.cond.value;
    return j;
}

json params_json(const TccParams& params, const DiscoveryResult& result) {
    // workers deliberately left out: the output is identical for any count
    json j;
    j["theta"] = params.theta;
    j["eta"] = params.eta;
    j["trees"] = params.m;
    j["max_context_size"] = params.max_context_size;
    j["min_leaf"] = params.tree.min_leaf;
    j["fisher_alpha"] = params.tree.fisher_alpha;
    j["max_depth"] = params.tree.max_depth;
    j["strata"] = params.causal.strata;
    j["min_arm"] = params.causal.min_arm;
    j["alpha"] = params.causal.alpha;
    j["seed"] = params.seed;
    if (params.treatments) {
        json names = json::array();
        for (const int v : *params.treatments) names.push_back(result.variables.at(v).name);
        j["treatments"] = names;
    }
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void metrics_json(json& j, const eval::Metrics& m) {
    j["precision"] = m.precision;
    if (m.recall_defined)
        j["recall"] = m.recall;
    else
        j["recall"] = nullptr;
    j["f1"] = m.f1;
    j["tp"] = m.tp;
    j["credited"] = m.credited;
    j["predicted"] = m.n_pred;
    j["truth"] = m.n_truth;
}

}  // namespace

json rules_to_json(const DiscoveryResult& result, const TccParams& params) {
    json file;
    file["params"] = params_json(params, result);
    json diag;
    diag["rules_total"] = result.diagnostics.rules_total;
    diag["rules_kept"] = result.diagnostics.rules_kept;
    diag["candidates"] = result.diagnostics.enumerated;
    diag["tested"] = result.diagnostics.tested;
    diag["untestable"] = result.diagnostics.untestable;
    diag["redundant_skipped"] = result.diagnostics.redundant_skipped;
    diag["accepted"] = result.diagnostics.accepted;
    file["diagnostics"] = diag;

    json rules = json::array();
    for (const CausalRule& rule : result.rules) {
        json r;
        r["treatment"] = result.variables.at(rule.treatment).name;
        json ctx = json::array();
        for (const VarCondition& term : rule.context) ctx.push_back(condition_json(result, term));
        r["context"] = ctx;
        r["ace"] = rule.ace;
        r["direction"] = rule.direction;
        r["support"] = rule.diagnostics.n;
        json prov;
        prov["tree"] = rule.provenance.tree;
        prov["rule"] = rule.provenance.rule;
        r["provenance"] = prov;
        r["params"] = file["params"];
        json extra;
        extra["strata"] = rule.diagnostics.strata.size();
        extra["dropped_fraction"] = rule.diagnostics.dropped_fraction;
        extra["treated"] = rule.diagnostics.treated;
        extra["control"] = rule.diagnostics.control;
        json covs = json::array();
        for (const int v : rule.diagnostics.covariates)
            covs.push_back(result.variables.at(v).name);
        extra["covariates"] = covs;
        r["estimate"] = extra;
        rules.push_back(std::move(r));
    }
    file["rules"] = std::move(rules);
    return file;
}

std::vector<eval::ScoredRule> scored_rules_from_json(const json& rules_file) {
    if (!rules_file.contains("rules") || !rules_file["rules"].is_array())
        throw DataError("rule file lacks a rules array");
    std::vector<eval::ScoredRule> out;
    for (const auto& r : rules_file["rules"]) {
        eval::ScoredRule sr;
        sr.treatment = r.at("treatment").get<std::string>();
        for (const auto& term : r.at("context")) {
            const auto& value = term.at("value");
            std::string label = value.is_string() ? value.get<std::string>() : value.dump();
            sr.context.emplace_back(term.at("var").get<std::string>(), std::move(label));
        }
        out.push_back(std::move(sr));
    }
    return out;
}

json truth_to_json(const GroundTruth& truth) {
    json j;
    j["context_var"] = truth.context_var;
    json direct, ancestors;
    for (int v = 0; v < 2; ++v) {
        direct[std::to_string(v)] = truth.direct[v];
        ancestors[std::to_string(v)] = truth.ancestors[v];
    }
    j["direct"] = direct;
    j["ancestors"] = ancestors;
    return j;
}

GroundTruth truth_from_json(const json& j) {
    GroundTruth truth;
    truth.context_var = j.at("context_var").get<std::string>();
    for (int v = 0; v < 2; ++v) {
        const std::string key = std::to_string(v);
        truth.direct[v] = j.at("direct").at(key).get<std::vector<std::string>>();
        if (j.contains("ancestors"))
            truth.ancestors[v] = j.at("ancestors").at(key).get<std::vector<std::string>>();
    }
    return truth;
}

json report_to_json(const eval::Report& report) {
    json j;
    for (int v = 0; v < 2; ++v) {
        json m;
        metrics_json(m, report.per_context[v]);
        j["context_" + std::to_string(v)] = m;
    }
    json pooled;
    metrics_json(pooled, report.pooled);
    j["pooled"] = pooled;
    return j;
}

std::string report_to_text(const eval::Report& report) {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s\n", "context", "P", "R", "F1");
    out << line;
    const auto row = [&](const std::string& name, const eval::Metrics& m) {
        if (m.recall_defined)
            std::snprintf(line, sizeof(line), "%-10s %10.4f %10.4f %10.4f\n", name.c_str(),
                          m.precision, m.recall, m.f1);
        else
            std::snprintf(line, sizeof(line), "%-10s %10.4f %10s %10s\n", name.c_str(),
                          m.precision, "n/a", "n/a");
        out << line;
    };
    row("0", report.per_context[0]);
    row("1", report.per_context[1]);
    row("pooled", report.pooled);
    return out.str();
}

void write_csv(const Dataset& d, std::ostream& out) {
    const auto& vars = d.variables();
    for (std::size_t v = 0; v < vars.size(); ++v)
        out << (v ? "," : "") << vars[v].name;
    out << "\n";
    const std::int64_t n = d.n_rows();
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < vars.size(); ++v) {
            if (v) out << ",";
            if (vars[v].kind == VarKind::Categorical)
                out << vars[v].labels[d.category(i, static_cast<int>(v))];
            else
                out << format_double(d.value(i, static_cast<int>(v)));
        }
        out << "\n";
    }
}

json tree_to_json(const TreeNode& t, const Dataset& d) {
    json j;
    j["n"] = t.n();
    j["counts"] = {t.class_counts[0], t.class_counts[1]};
    if (t.is_leaf()) {
        j["predicted"] = t.predicted;
        return j;
    }
    j["split_var"] = d.var(t.split->var).name;
    json children = json::array();
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        json child;
        child["condition"] = condition_to_string(d, {t.split->var, t.branch_conditions[i]});
        child["node"] = tree_to_json(t.children[i], d);
        children.push_back(std::move(child));
    }
    j["children"] = std::move(children);
    return j;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << contents;
    if (!out) throw DataError("write failed: " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace ctxcausal::io
