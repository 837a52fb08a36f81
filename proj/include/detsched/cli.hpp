#pragma once

#include <ostream>

namespace detsched {

// Exit codes: 0 ok, 2 parse/validation, 3 capacity, 4 internal invariant.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace detsched
