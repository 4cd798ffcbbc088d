#pragma once

namespace mpre::cli {

// Exit codes: 0 success, 1 usage/validation, 2 numeric failure, 3 I/O.
int run(int argc, const char* const* argv);

}  // namespace mpre::cli
