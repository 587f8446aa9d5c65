#pragma once

namespace stira::cli {

inline constexpr const char* kToolVersion = "stira 0.1.0";

// exit codes: 0 ok, 2 config, 3 static solver, 4 pulse singularity, 5 propagation
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitSingular = 4;
inline constexpr int kExitPropagation = 5;

int run(int argc, const char* const* argv);

}  // namespace stira::cli
