#include "micropol/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <vector>

namespace micropol {

namespace {

template <class T>
void put(std::ostream& os, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) throw SnapshotError("snapshot truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

void put_all(std::ostream& os, const std::vector<double>& v) {
    for (double x : v) put(os, x);
}

void get_all(std::istream& is, std::vector<double>& v) {
    for (double& x : v) x = get<double>(is);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SimState& state) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw SnapshotError("cannot open " + path.string() + " for writing");
    const GridSpec& g = state.w.grid();
    os.write("MPOL", 4);
    put(os, static_cast<std::uint16_t>(kSnapshotVersion));
    put(os, static_cast<std::uint32_t>(g.nx));
    put(os, static_cast<std::uint32_t>(g.ny));
    put(os, g.lx);
    put(os, g.ly);
    put(os, state.t);
    put_all(os, state.w.data());
    put_all(os, state.u.ux_data());
    put_all(os, state.u.uy_data());
    if (!os) throw SnapshotError("write failed for " + path.string());
}

SimState read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SnapshotError("cannot open " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "MPOL", 4) != 0) throw SnapshotError(path.string() + ": bad magic");
    const auto version = get<std::uint16_t>(is);
    if (version != kSnapshotVersion)
        throw SnapshotError(path.string() + ": unsupported version " + std::to_string(version));
    const auto nx = get<std::uint32_t>(is);
    const auto ny = get<std::uint32_t>(is);
    const double lx = get<double>(is);
    const double ly = get<double>(is);
    SimState s;
    s.t = get<double>(is);
    const GridSpec g = make_grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
    s.w = ScalarField(g);
    s.u = VelocityField(g, false);
    get_all(is, s.w.data());
    get_all(is, s.u.ux_data());
    get_all(is, s.u.uy_data());
    bool walls_zero = true;
    for (int j = 0; j < g.ny; ++j) walls_zero = walls_zero && s.u.ux(0, j) == 0.0 && s.u.ux(g.nx, j) == 0.0;
    for (int i = 0; i < g.nx; ++i) walls_zero = walls_zero && s.u.uy(i, 0) == 0.0 && s.u.uy(i, g.ny) == 0.0;
    s.u.set_no_slip(walls_zero);
    if (!s.w.all_finite() || !s.u.all_finite()) throw SnapshotError(path.string() + ": non-finite values");
    return s;
}

void write_snapshot_text(const std::filesystem::path& path, const SimState& state) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw SnapshotError("cannot open " + path.string() + " for writing");
    const GridSpec& g = state.w.grid();
    os << std::setprecision(17);
    os << "# w t=" << state.t << "\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) os << g.xc(i) << ' ' << g.yc(j) << ' ' << state.w(i, j) << '\n';
    os << "# ux\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) os << g.xf(i) << ' ' << g.yc(j) << ' ' << state.u.ux(i, j) << '\n';
    os << "# uy\n";
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) os << g.xc(i) << ' ' << g.yf(j) << ' ' << state.u.uy(i, j) << '\n';
    if (!os) throw SnapshotError("write failed for " + path.string());
}

}  // namespace micropol
