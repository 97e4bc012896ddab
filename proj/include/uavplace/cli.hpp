#pragma once

namespace uavplace::cli {

// Entry point behind main(). Exit codes: 0 success, 2 bad arguments or
// malformed input, 3 infeasible (fleet bound exhausted).
int run(int argc, const char* const* argv);

}  // namespace uavplace::cli
