#pragma once

// Binary field snapshots: "MPOL", u16 version, u32 nx, ny, f64 lx, ly, t,
// then w, ux, uy as little-endian f64 in row-major order.

#include <filesystem>
#include <stdexcept>

#include "micropol/micropolar.hpp"

namespace micropol {

inline constexpr unsigned kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_snapshot(const std::filesystem::path& path, const SimState& state);

/// The velocity is flagged no-slip when every wall-normal face is zero.
SimState read_snapshot(const std::filesystem::path& path);

/// Plain-text export: one "x y value" line per cell for w, then per face for ux and uy.
void write_snapshot_text(const std::filesystem::path& path, const SimState& state);

}  // namespace micropol
