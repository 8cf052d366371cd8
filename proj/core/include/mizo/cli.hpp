#pragma once

#include <string>
#include <vector>

namespace mizo {

// Subcommands: gen-scenes, demo, bench, diag-separation, diag-pcd, report.
// Returns 0 on success, 2 on configuration errors, 3 on runtime errors.
int cli_main(const std::vector<std::string>& args);

}  // namespace mizo
