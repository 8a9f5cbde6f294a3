#pragma once

#include <string>
#include <vector>

namespace vcm::cli {

// Entry point behind the vcm binary; args includes argv[0]. Exit codes:
// 0 success (partial-input warnings included), 2 configuration error,
// 3 unreadable/missing inputs, 4 network failure.
int run(const std::vector<std::string>& args);

}  // namespace vcm::cli
