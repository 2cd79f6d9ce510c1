#pragma once

#include <stdexcept>
#include <string>

namespace ctxcausal {

// Bad input: missing files, malformed tables, violated call contracts.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A causal-effect candidate that cannot be evaluated on its subpopulation
// (empty subset, single-class treatment, no propensity overlap). Callers
// skip the candidate instead of aborting the run.
class UntestableError : public std::runtime_error {
public:
    explicit UntestableError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctxcausal
