#pragma once

// Binary state snapshots for checkpoint/resume.
//
// Layout: a 64-byte ASCII header
//   "KSSNAP1 dim=<d> nx=<nx> ny=<ny> t=<hex-float> steps=<n>"
// padded with spaces and terminated by '\n' in byte 63, followed by u and
// then v as little-endian IEEE-754 binary64 values in row-major order.
// In 1D ny is written as 1.

#include <cstdint>
#include <string>

#include "kellerscope/stepper.hpp"

namespace kellerscope {

inline constexpr std::size_t kSnapshotHeaderBytes = 64;

struct SnapshotHeader {
    int dim = 1;
    std::size_t nx = 0;
    std::size_t ny = 1;
    double t = 0.0;
    std::int64_t steps = 0;
};

// Throws SnapshotError if the header fields do not fit in 64 bytes.
std::string format_snapshot_header(const SnapshotHeader& h);
SnapshotHeader parse_snapshot_header(const std::string& header);

void write_snapshot(const SimState& state, const std::string& path);

// Reads a snapshot written for `expected` (the header carries no extents).
// The returned state is Running. Throws SnapshotError on bad magic,
// unsupported dimension, shape mismatch or truncation.
SimState read_snapshot(const std::string& path, const Domain& expected);

} // namespace kellerscope
