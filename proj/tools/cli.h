#pragma once

#include <iosfwd>

namespace bellclone {

/// Exit codes: 0 every check passed, 1 a verification failed, 2 usage error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace bellclone
