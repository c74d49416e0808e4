#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"
#include "micropol/micropolar.hpp"

namespace micropol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitConfig = 64;

/// Initial state named by the config (grid taken from the snapshot when used).
SimState initial_state(const RunConfig& cfg);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string error;
    long steps = 0;
    int violations = 0;
    double max_energy_defect = 0.0;  ///< relative to max(scale, floor)
    double max_l4_defect = 0.0;
    double a2_rate = 0.0;
    double gradw_rate = 0.0;
    bool linf_w_monotone = true;
};

/// Integrates, writes diagnostics.csv, snapshots and summary.txt into `out`.
RunOutcome execute_run(const RunConfig& cfg, const std::filesystem::path& out);

int run_command(const RunConfig& cfg);
int fixed_point_command(const RunConfig& cfg);
int audit_command(const RunConfig& cfg);
int sweep_command(const RunConfig& cfg);
int verify_command(const RunConfig& cfg);

}  // namespace micropol::cli
