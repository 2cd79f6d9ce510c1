#pragma once

namespace ctxcausal::cli {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 no testable
// candidates.
int run(int argc, const char* const* argv);

}  // namespace ctxcausal::cli
