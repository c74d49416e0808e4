#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace micropol::cli;

namespace {

std::vector<micropol::cli::ConfigIssue> issues_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigParseError& e) {
        return e.issues();
    }
    return {};
}

}  // namespace

TEST(Config, DefaultsDescribeReferenceRun) {
    const RunConfig c = parse_config("# nothing set\n\n");
    EXPECT_EQ(c.nx, 64);
    EXPECT_EQ(c.ny, 64);
    EXPECT_DOUBLE_EQ(c.nu, 0.1);
    EXPECT_DOUBLE_EQ(c.kappa, 0.1);
    EXPECT_EQ(c.initial_condition, "reference");
    EXPECT_EQ(c.mode, Mode::Run);
}

TEST(Config, ParsesScalarsListsAndComments) {
    const RunConfig c = parse_config(
        "nx = 32   # comment\n"
        "ny=32\n"
        "kappa = 0\n"
        "mode = sweep\n"
        "sweep_nu = 0.1, 1.0\n"
        "sweep_nx = 16,32\n"
        "seed = 99\n");
    EXPECT_EQ(c.nx, 32);
    EXPECT_DOUBLE_EQ(c.kappa, 0.0);
    EXPECT_EQ(c.mode, Mode::Sweep);
    EXPECT_EQ(c.sweep_nu, (std::vector<double>{0.1, 1.0}));
    EXPECT_EQ(c.sweep_nx, (std::vector<int>{16, 32}));
    EXPECT_EQ(c.seed, 99u);
}

TEST(Config, CollectsEveryIssueWithLineNumbers) {
    const auto issues = issues_of(
        "nx = 4\n"
        "bogus = 1\n"
        "nu = -1\n"
        "nu = 2\n"
        "T = abc\n");
    ASSERT_EQ(issues.size(), 5u);
    EXPECT_EQ(issues[0].line, 1);
    EXPECT_EQ(issues[1].line, 2);
    EXPECT_NE(issues[1].message.find("unknown key"), std::string::npos);
    EXPECT_EQ(issues[2].line, 3);
    EXPECT_EQ(issues[3].line, 4);
    EXPECT_NE(issues[3].message.find("duplicate"), std::string::npos);
    EXPECT_EQ(issues[4].line, 5);
}

TEST(Config, RejectsNonSquareCellsAndInconsistentSteps) {
    auto a = issues_of("nx = 32\nny = 32\nlx = 2\n");
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].line, 3);
    EXPECT_NE(a[0].message.find("non-square"), std::string::npos);
    EXPECT_EQ(issues_of("dt_max = 1e-3\ndt_floor = 1e-2\n").size(), 1u);
    EXPECT_EQ(issues_of("initial_condition = snapshot\n").size(), 1u);
    EXPECT_EQ(issues_of("mode = dance\n").size(), 1u);
}

TEST(Config, MissingFileIsAConfigError) {
    EXPECT_THROW(load_config("/nonexistent/micropol.cfg"), ConfigParseError);
}

TEST(Config, ModeNamesRoundTrip) {
    for (Mode m : {Mode::Run, Mode::FixedPoint, Mode::Audit, Mode::Sweep, Mode::Verify})
        EXPECT_EQ(parse_mode(mode_name(m)), m);
}

TEST(Report, RealsRoundTripThroughText) {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-310})
        EXPECT_EQ(std::strtod(format_real(x).c_str(), nullptr), x);
}

TEST(Cli, ZeroInitialConditionRunsCleanly) {
    RunConfig cfg = parse_config("initial_condition = zero\nnx = 16\nny = 16\nT = 0.05\n");
    const auto out = std::filesystem::temp_directory_path() / "micropol_cli_zero";
    std::filesystem::remove_all(out);
    const RunOutcome r = execute_run(cfg, out);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_EQ(r.violations, 0);
    EXPECT_GT(r.steps, 0);
    for (const char* f : {"diagnostics.csv", "summary.txt", "snapshot_initial.mpol", "snapshot_final.mpol"})
        EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
}
