#pragma once

// Command-line front end. Exit codes: 0 pass, 1 property failure,
// 2 usage error, 3 numeric failure.

namespace ale::cli {

int run(int argc, char** argv);

}  // namespace ale::cli
