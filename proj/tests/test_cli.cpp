#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ctxcausal/cli.hpp"
#include "ctxcausal/io.hpp"

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"ctxcausal"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return ctxcausal::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempFiles {
    std::vector<std::string> paths;

    std::string add(const std::string& name) {
        paths.push_back(name);
        return name;
    }
    ~TempFiles() {
        for (const auto& p : paths) std::remove(p.c_str());
    }
};

}  // namespace

TEST_CASE("generate -> discover -> evaluate pipeline completes") {
    TempFiles tmp;
    const auto data = tmp.add("cli_pipe_data.csv");
    const auto truth = tmp.add("cli_pipe_truth.json");
    const auto rules = tmp.add("cli_pipe_rules.json");
    const auto metrics = tmp.add("cli_pipe_metrics.json");

    CHECK(run_cli({"generate", "--vars", "10", "--samples", "10000", "--seed", "7", "--out", data,
                   "--truth", truth}) == 0);
    CHECK(run_cli({"discover", "--data", data, "--target", "Y", "--out", rules, "--seed", "7",
                   "--workers", "2"}) == 0);
    CHECK(run_cli({"evaluate", "--rules", rules, "--truth", truth, "--context-var", "Xc", "--out",
                   metrics}) == 0);

    const auto parsed = ctxcausal::io::read_json_file(metrics);
    CHECK(parsed.contains("pooled"));
    CHECK(parsed["pooled"].contains("f1"));
    const auto rules_json = ctxcausal::io::read_json_file(rules);
    CHECK(rules_json.contains("rules"));
    CHECK(rules_json["params"]["seed"] == 7);
}

TEST_CASE("the treatments whitelist restricts every output rule") {
    TempFiles tmp;
    const auto data = tmp.add("cli_wl_data.csv");
    const auto truth = tmp.add("cli_wl_truth.json");
    const auto rules = tmp.add("cli_wl_rules.json");
    REQUIRE(run_cli({"generate", "--vars", "8", "--samples", "6000", "--seed", "3", "--out", data,
                     "--truth", truth}) == 0);
    const int rc = run_cli({"discover", "--data", data, "--target", "Y", "--out", rules,
                            "--treatments", "X1,X2,X3"});
    REQUIRE((rc == 0 || rc == 3));
    for (const auto& rule : ctxcausal::io::read_json_file(rules)["rules"]) {
        const std::string name = rule["treatment"].get<std::string>();
        CHECK((name == "X1" || name == "X2" || name == "X3"));
    }
}

TEST_CASE("equal seeds give byte-identical rule files") {
    TempFiles tmp;
    const auto data = tmp.add("cli_det_data.csv");
    const auto truth = tmp.add("cli_det_truth.json");
    const auto first = tmp.add("cli_det_rules1.json");
    const auto second = tmp.add("cli_det_rules2.json");
    REQUIRE(run_cli({"generate", "--vars", "8", "--samples", "6000", "--seed", "11", "--out", data,
                     "--truth", truth}) == 0);
    REQUIRE(run_cli({"discover", "--data", data, "--target", "Y", "--out", first, "--seed", "11",
                     "--workers", "1"}) == 0);
    REQUIRE(run_cli({"discover", "--data", data, "--target", "Y", "--out", second, "--seed", "11",
                     "--workers", "2"}) == 0);
    CHECK(slurp(first) == slurp(second));
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli({}) == 1);
    CHECK(run_cli({"discover"}) == 1);             // missing required flags
    CHECK(run_cli({"no-such-subcommand"}) == 1);
}

TEST_CASE("data errors exit with code 2") {
    CHECK(run_cli({"discover", "--data", "missing_file.csv", "--target", "Y"}) == 2);
    TempFiles tmp;
    const auto data = tmp.add("cli_err_data.csv");
    const auto truth = tmp.add("cli_err_truth.json");
    REQUIRE(run_cli({"generate", "--vars", "6", "--samples", "2000", "--seed", "5", "--out", data,
                     "--truth", truth}) == 0);
    CHECK(run_cli({"discover", "--data", data, "--target", "NoSuchColumn"}) == 2);
    CHECK(run_cli({"discover", "--data", data, "--target", "Y", "--treatments", "Ghost"}) == 2);
}

TEST_CASE("a tiny bench sweep completes") {
    TempFiles tmp;
    const auto out = tmp.add("cli_bench.json");
    CHECK(run_cli({"bench", "--vars-list", "8", "--trees", "1", "--samples", "2000", "--seed", "2",
                   "--out", out}) == 0);
    const auto parsed = ctxcausal::io::read_json_file(out);
    REQUIRE(parsed["cells"].size() == 1);
    CHECK(parsed["cells"][0]["vars"] == 8);
}
