// Run orchestration shared by the CLI and the test suites: validator runs,
// solve + diagnostics with CSV/JSON emission, stored-field norm reports, and
// parameter sweeps.  All emission is byte-deterministic for a fixed config
// and seed.

#ifndef PARVEX_RUN_HPP
#define PARVEX_RUN_HPP

#include <string>
#include <vector>

#include "parvex/config.hpp"

namespace parvex {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolverAbort = 3;

// Profile tokens: "growth", "thm31" (existence), "thm32" (subcritical),
// "thm41" (decay).  The growth check always runs.
int run_validate(const RunConfig& rc, const std::vector<std::string>& profiles,
                 const std::string& out_dir);

int run_solve(const RunConfig& rc, const std::string& out_dir);

int run_norms(const RunConfig& rc, const std::string& field_path, const std::string& out_dir);

int run_sweep(const RunConfig& rc, const std::string& out_dir);

} // namespace parvex

#endif
