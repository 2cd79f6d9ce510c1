#include "ctxcausal/cli.hpp"

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctxcausal/dataset.hpp"
#include "ctxcausal/errors.hpp"
#include "ctxcausal/eval.hpp"
#include "ctxcausal/io.hpp"
#include "ctxcausal/log.hpp"
#include "ctxcausal/synth.hpp"
#include "ctxcausal/tcc.hpp"

namespace ctxcausal::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNoCandidates = 3;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

std::vector<int> parse_int_list(const std::string& csv, const std::string& flag) {
    std::vector<int> values;
    for (const std::string& item : split_list(csv)) {
        try {
            values.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "expected a comma-separated integer list");
        }
    }
    if (values.empty()) throw CLI::ValidationError(flag, "list cannot be empty");
    return values;
}

struct DiscoverArgs {
    std::string data, target, out, treatments, dump_tree;
    TccParams params;
};

int run_discover_once(const Dataset& d, const TccParams& params, const std::string& out_path,
                      const std::string& dump_path) {
    const auto start = std::chrono::steady_clock::now();
    const DiscoveryResult result = discover(d, params);
    const auto stop = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(stop - start).count();

    if (!dump_path.empty()) {
        const TreeNode tree = build_tree(d, params.tree);
        io::write_file(dump_path, io::tree_to_json(tree, d).dump(2) + "\n");
    }
    const std::string payload = io::rules_to_json(result, params).dump(2) + "\n";
    if (out_path.empty())
        std::cout << payload;
    else
        io::write_file(out_path, payload);
    std::cerr << "discover: " << result.rules.size() << " rules from "
              << result.diagnostics.tested << " tested candidates in " << seconds << " s\n";
    return result.diagnostics.tested == 0 ? kNoCandidates : kOk;
}

int cmd_generate(int vars, std::int64_t samples, std::uint64_t seed, const std::string& out,
                 const std::string& truth_path, const SynthConfig& cfg) {
    const auto [data, truth] = generate_pair(vars, samples, seed, cfg);
    std::ostringstream csv;
    io::write_csv(data, csv);
    io::write_file(out, csv.str());
    io::json j = io::truth_to_json(truth);
    io::json params;
    params["vars"] = vars;
    params["samples"] = samples;
    params["seed"] = seed;
    params["edge_prob"] = cfg.edge_prob > 0.0 ? cfg.edge_prob : 2.0 / vars;
    params["cpt_lo"] = cfg.cpt_lo;
    params["cpt_hi"] = cfg.cpt_hi;
    params["independent_dags"] = cfg.independent_dags;
    params["shuffle"] = cfg.shuffle;
    j["params"] = std::move(params);
    io::write_file(truth_path, j.dump(2) + "\n");
    std::cerr << "generate: wrote " << data.n_rows() << " rows x " << data.n_vars()
              << " columns to " << out << "\n";
    return kOk;
}

int cmd_discover(const DiscoverArgs& args) {
    Dataset d = load_csv(args.data, args.target);
    TccParams params = args.params;
    if (!args.treatments.empty()) {
        std::vector<int> ids;
        for (const std::string& name : split_list(args.treatments)) {
            const auto id = d.var_id(name);
            if (!id) throw DataError("unknown treatment variable: " + name);
            if (!d.var(*id).is_binary())
                throw DataError("treatment must be binary categorical: " + name);
            ids.push_back(*id);
        }
        params.treatments = std::move(ids);
    }
    return run_discover_once(d, params, args.out, args.dump_tree);
}

int cmd_evaluate(const std::string& rules_path, const std::string& truth_path,
                 const std::string& context_var, bool strict, const std::string& out) {
    const auto rules = io::scored_rules_from_json(io::read_json_file(rules_path));
    GroundTruth truth = io::truth_from_json(io::read_json_file(truth_path));
    if (!context_var.empty()) {
        if (truth.context_var != context_var)
            log::warn("context variable " + context_var + " overrides truth file's " +
                      truth.context_var);
        truth.context_var = context_var;
    }
    eval::EvalOptions opts;
    opts.strict = strict;
    const eval::Report report = eval::evaluate(rules, truth, opts);
    std::cout << io::report_to_text(report);
    if (!out.empty()) {
        io::json j = io::report_to_json(report);
        io::json params;
        params["rules"] = rules_path;
        params["truth"] = truth_path;
        params["context_var"] = truth.context_var;
        params["strict"] = strict;
        j["params"] = std::move(params);
        io::write_file(out, j.dump(2) + "\n");
    }
    return kOk;
}

int cmd_bench(const std::vector<int>& vars_list, const std::vector<int>& trees_list,
              std::int64_t samples, std::uint64_t seed, int max_context, int workers,
              const std::string& out) {
    io::json cells = io::json::array();
    char line[160];
    std::snprintf(line, sizeof(line), "%8s %6s %10s %8s\n", "vars", "trees", "seconds", "rules");
    std::cout << line;
    for (const int vars : vars_list) {
        const auto [data, truth] = generate_pair(vars, samples, seed, {});
        (void)truth;
        for (const int m : trees_list) {
            TccParams params;
            params.m = m;
            params.max_context_size = max_context;
            params.seed = seed;
            params.workers = workers;
            const auto start = std::chrono::steady_clock::now();
            const DiscoveryResult result = discover(data, params);
            const auto stop = std::chrono::steady_clock::now();
            const double seconds = std::chrono::duration<double>(stop - start).count();
            std::snprintf(line, sizeof(line), "%8d %6d %10.2f %8zu\n", vars, m, seconds,
                          result.rules.size());
            std::cout << line << std::flush;
            io::json cell;
            cell["vars"] = vars;
            cell["trees"] = m;
            cell["seconds"] = seconds;
            cell["rules"] = result.rules.size();
            cells.push_back(std::move(cell));
        }
    }
    if (!out.empty()) {
        io::json j;
        j["samples"] = samples;
        j["seed"] = seed;
        j["max_context_size"] = max_context;
        j["cells"] = std::move(cells);
        io::write_file(out, j.dump(2) + "\n");
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"context-specific causal rule discovery"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "synthesize a benchmark dataset with ground truth");
    int gen_vars = 10;
    std::int64_t gen_samples = 10000;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_truth;
    SynthConfig synth_cfg;
    generate->add_option("--vars", gen_vars, "predictor variable count")->required();
    generate->add_option("--samples", gen_samples, "total row count (split across contexts)")->required();
    generate->add_option("--seed", gen_seed, "random seed");
    generate->add_option("--out", gen_out, "output CSV path")->required();
    generate->add_option("--truth", gen_truth, "ground-truth JSON path")->required();
    generate->add_flag("--independent-dags", synth_cfg.independent_dags,
                       "re-randomize the DAG per context instead of only the CPTs");
    generate->add_option("--edge-prob", synth_cfg.edge_prob, "edge probability (default 2/(vars))");
    generate->add_option("--cpt-lo", synth_cfg.cpt_lo, "CPT range lower bound");
    generate->add_option("--cpt-hi", synth_cfg.cpt_hi, "CPT range upper bound");
    generate->add_flag("--shuffle", synth_cfg.shuffle, "shuffle stacked rows (seeded)");

    // discover
    auto* discover_cmd = app.add_subcommand("discover", "mine context-specific causal rules");
    DiscoverArgs da;
    discover_cmd->add_option("--data", da.data, "input CSV path")->required();
    discover_cmd->add_option("--target", da.target, "target column name")->required();
    discover_cmd->add_option("--theta", da.params.theta, "minimal rule confidence");
    discover_cmd->add_option("--eta", da.params.eta, "minimal causal effect");
    discover_cmd->add_option("--trees", da.params.m, "tree count (1 = single tree)");
    discover_cmd->add_option("--max-context", da.params.max_context_size, "context size cap");
    discover_cmd->add_option("--min-leaf", da.params.tree.min_leaf,
                             "minimum rows per leaf (0 = max(20, 1% of n))");
    discover_cmd->add_option("--alpha", da.params.tree.fisher_alpha,
                             "significance level for pruning and covariate tests");
    discover_cmd->add_option("--strata", da.params.causal.strata, "propensity stratum count");
    discover_cmd->add_option("--min-arm", da.params.causal.min_arm,
                             "minimum treated/control rows per stratum");
    discover_cmd->add_option("--treatments", da.treatments,
                             "comma-separated whitelist of treatment variables");
    discover_cmd->add_option("--out", da.out, "rules JSON path (stdout when omitted)");
    discover_cmd->add_option("--seed", da.params.seed, "seed echoed into output metadata");
    discover_cmd->add_option("--workers", da.params.workers, "parallel workers (output-invariant)");
    discover_cmd->add_option("--dump-tree", da.dump_tree, "also write the first decision tree as JSON");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score rules against ground truth");
    std::string ev_rules, ev_truth, ev_context, ev_out;
    bool ev_strict = false;
    evaluate->add_option("--rules", ev_rules, "rules JSON path")->required();
    evaluate->add_option("--truth", ev_truth, "ground-truth JSON path")->required();
    evaluate->add_option("--context-var", ev_context, "planted context variable name");
    evaluate->add_flag("--strict", ev_strict, "count only rules that pin the context value");
    evaluate->add_option("--out", ev_out, "metrics JSON path");

    // bench
    auto* bench = app.add_subcommand("bench", "scalability sweep over variable counts and tree counts");
    std::string bench_vars = "50,100,150,200,250", bench_trees = "1,3,5", bench_out;
    std::int64_t bench_samples = 10000;
    std::uint64_t bench_seed = 1;
    int bench_context = 2, bench_workers = 1;
    bench->add_option("--vars-list", bench_vars, "comma-separated variable counts");
    bench->add_option("--trees", bench_trees, "comma-separated tree counts");
    bench->add_option("--samples", bench_samples, "rows per generated dataset");
    bench->add_option("--seed", bench_seed, "random seed");
    bench->add_option("--max-context", bench_context, "context size cap");
    bench->add_option("--workers", bench_workers, "parallel workers");
    bench->add_option("--out", bench_out, "bench JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageError;
    }

    try {
        if (generate->parsed())
            return cmd_generate(gen_vars, gen_samples, gen_seed, gen_out, gen_truth, synth_cfg);
        if (discover_cmd->parsed()) return cmd_discover(da);
        if (evaluate->parsed())
            return cmd_evaluate(ev_rules, ev_truth, ev_context, ev_strict, ev_out);
        if (bench->parsed())
            return cmd_bench(parse_int_list(bench_vars, "--vars-list"),
                             parse_int_list(bench_trees, "--trees"), bench_samples, bench_seed,
                             bench_context, bench_workers, bench_out);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const UntestableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoCandidates;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}

}  // namespace ctxcausal::cli
