#pragma once

namespace roto::cli {

// Exit codes: 0 success, 1 validation or usage error, 2 runtime failure.
int run(int argc, char** argv);

}  // namespace roto::cli
