#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "micropol/snapshot.hpp"

using namespace micropol;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "micropol_snapshot_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

SimState sample_state() {
    const GridSpec g = make_grid(12, 8, 1.5, 1.0);
    SimState s{0.375, 17, VelocityField(g, true), ScalarField(g)};
    for (std::size_t k = 0; k < s.w.data().size(); ++k) s.w.data()[k] = std::sin(0.1 * static_cast<double>(k)) / 3.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) s.u.ux(i, j) = 1e-300 * i - j;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s.u.uy(i, j) = std::ldexp(1.0, -i) + j;
    return s;
}

}  // namespace

TEST(Snapshot, RoundTripIsBitExact) {
    const SimState s = sample_state();
    const auto path = scratch("roundtrip.mpol");
    write_snapshot(path, s);
    const SimState r = read_snapshot(path);
    EXPECT_EQ(r.u.grid(), s.u.grid());
    EXPECT_EQ(r.t, s.t);
    EXPECT_EQ(r.w.data(), s.w.data());
    EXPECT_EQ(r.u.ux_data(), s.u.ux_data());
    EXPECT_EQ(r.u.uy_data(), s.u.uy_data());
    EXPECT_TRUE(r.u.no_slip());
}

TEST(Snapshot, FileLayoutHasFixedHeader) {
    const SimState s = sample_state();
    const auto path = scratch("layout.mpol");
    write_snapshot(path, s);
    // magic, u16 version, 2 x u32, 3 x f64, then w, ux, uy.
    const std::size_t header = 4 + 2 + 8 + 24;
    const std::size_t values = s.w.data().size() + s.u.ux_data().size() + s.u.uy_data().size();
    EXPECT_EQ(std::filesystem::file_size(path), header + 8 * values);
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "MPOL");
}

TEST(Snapshot, RejectsCorruptFiles) {
    const SimState s = sample_state();
    const auto path = scratch("corrupt.mpol");
    write_snapshot(path, s);
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
    EXPECT_THROW(read_snapshot(path), SnapshotError);

    const auto bad = scratch("magic.mpol");
    std::ofstream(bad, std::ios::binary) << "NOPE and then some bytes";
    EXPECT_THROW(read_snapshot(bad), SnapshotError);
    EXPECT_THROW(read_snapshot(scratch("missing.mpol")), SnapshotError);
}

TEST(Snapshot, OpenWallFlagIsRecovered) {
    SimState s = sample_state();
    s.u.set_no_slip(false);
    s.u.ux(0, 3) = 0.5;
    const auto path = scratch("open.mpol");
    write_snapshot(path, s);
    EXPECT_FALSE(read_snapshot(path).u.no_slip());
}
