#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctxcausal/eval.hpp"
#include "ctxcausal/synth.hpp"
#include "ctxcausal/tcc.hpp"

namespace ctxcausal::io {

using json = nlohmann::ordered_json;

// Rule file: {params, diagnostics, rules: [{treatment, context, ace,
// direction, support, provenance, params}]}. Field order is stable so equal
// runs serialize byte-identically.
json rules_to_json(const DiscoveryResult& result, const TccParams& params);
std::vector<eval::ScoredRule> scored_rules_from_json(const json& rules_file);

json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const json& j);

json report_to_json(const eval::Report& report);
std::string report_to_text(const eval::Report& report);

void write_csv(const Dataset& d, std::ostream& out);

json tree_to_json(const TreeNode& t, const Dataset& d);

void write_file(const std::string& path, const std::string& contents);
json read_json_file(const std::string& path);

}  // namespace ctxcausal::io
