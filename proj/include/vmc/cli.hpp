#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace vmc {

// Entry point behind the vmc binary; exposed so tests can drive the CLI
// in-process. Exit codes: 0 all variants hold, 1 some variant fails,
// 2 inconclusive verdicts remain, 3 usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vmc
