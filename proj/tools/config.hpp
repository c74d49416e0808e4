#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace micropol::cli {

enum class Mode { Run, FixedPoint, Audit, Sweep, Verify };

/// Flat `key = value` configuration. Every key is optional; defaults below.
struct RunConfig {
    int nx = 64;
    int ny = 64;
    double lx = 1.0;
    double ly = 1.0;
    double nu = 0.1;
    double kappa = 0.1;
    std::string initial_condition = "reference";  ///< reference | zero | snapshot
    double ic_amplitude = 1.0;
    std::filesystem::path ic_snapshot;
    double T = 1.0;
    double cfl_max = 0.9;
    double dt_floor = 1e-8;
    double dt_max = 0.0;  ///< 0 selects the default cap of choose_dt
    int diagnostics_interval = 1;
    int snapshot_interval = 0;  ///< 0 writes only initial and final snapshots
    std::filesystem::path output_dir = "out";
    Mode mode = Mode::Run;
    std::vector<double> sweep_nu;
    std::vector<double> sweep_kappa;
    std::vector<int> sweep_nx;
    double epsilon = 0.0;  ///< 0 selects h
    double picard_tol = 1e-8;
    int picard_max_iter = 20;
    double solver_tol = 1e-9;
    double energy_tol = 0.05;
    std::uint64_t seed = 20240611;
};

struct ConfigIssue {
    int line = 0;  ///< 0 when not tied to a line
    std::string message;
};

class ConfigParseError : public std::runtime_error {
public:
    explicit ConfigParseError(std::vector<ConfigIssue> issues);
    [[nodiscard]] const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Parses and validates; collects every problem before throwing.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

}  // namespace micropol::cli
