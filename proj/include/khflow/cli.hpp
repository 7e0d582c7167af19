#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace khflow {

// args excludes the program name. Returns 0, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace khflow
