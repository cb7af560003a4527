#pragma once

#include <string>
#include <vector>

namespace boltzmap::cli {

/// Entry point behind main(). Exit codes: 0 success, 1 usage error,
/// 2 data error, 3 numerical error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace boltzmap::cli
