#include "kellerscope/snapshot.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace kellerscope {

namespace {

constexpr char kMagic[] = "KSSNAP1";

std::uint64_t to_little_endian(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::little) {
        return bits;
    } else {
        return __builtin_bswap64(bits);
    }
}

void append_values(std::string& out, const Field& f) {
    for (double x : f.values()) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(x));
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        out.append(bytes, 8);
    }
}

void read_values(const char* data, Field& f) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        std::uint64_t bits;
        std::memcpy(&bits, data + 8 * k, 8);
        f[k] = std::bit_cast<double>(to_little_endian(bits));
    }
}

} // namespace

std::string format_snapshot_header(const SnapshotHeader& h) {
    char buf[160];
    const int n = std::snprintf(buf, sizeof buf, "%s dim=%d nx=%zu ny=%zu t=%a steps=%" PRId64, kMagic, h.dim, h.nx,
                                h.ny, h.t, h.steps);
    if (n < 0 || static_cast<std::size_t>(n) > kSnapshotHeaderBytes - 1) {
        throw SnapshotError("snapshot header '" + std::string(buf) + "' does not fit in " +
                            std::to_string(kSnapshotHeaderBytes) + " bytes");
    }
    std::string header(buf, static_cast<std::size_t>(n));
    header.resize(kSnapshotHeaderBytes - 1, ' ');
    header.push_back('\n');
    return header;
}

SnapshotHeader parse_snapshot_header(const std::string& header) {
    if (header.size() != kSnapshotHeaderBytes || header.back() != '\n')
        throw SnapshotError("snapshot header must be 64 bytes ending in a newline");
    if (header.compare(0, std::strlen(kMagic), kMagic) != 0 || header[std::strlen(kMagic)] != ' ')
        throw SnapshotError("bad snapshot magic (expected KSSNAP1)");

    SnapshotHeader h;
    std::istringstream in(header.substr(std::strlen(kMagic)));
    std::string token;
    bool seen[5] = {};
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw SnapshotError("malformed snapshot header token '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        char* end = nullptr;
        if (key == "dim") {
            h.dim = static_cast<int>(std::strtol(value.c_str(), &end, 10));
            seen[0] = true;
        } else if (key == "nx") {
            h.nx = std::strtoull(value.c_str(), &end, 10);
            seen[1] = true;
        } else if (key == "ny") {
            h.ny = std::strtoull(value.c_str(), &end, 10);
            seen[2] = true;
        } else if (key == "t") {
            h.t = std::strtod(value.c_str(), &end);
            seen[3] = true;
        } else if (key == "steps") {
            h.steps = std::strtoll(value.c_str(), &end, 10);
            seen[4] = true;
        } else {
            throw SnapshotError("unknown snapshot header field '" + key + "'");
        }
        if (end == value.c_str() || *end != '\0') throw SnapshotError("bad value in snapshot header: '" + token + "'");
    }
    for (bool s : seen)
        if (!s) throw SnapshotError("snapshot header is missing a field");
    if (h.dim != 1 && h.dim != 2) throw SnapshotError("unsupported snapshot dimension " + std::to_string(h.dim));
    return h;
}

void write_snapshot(const SimState& state, const std::string& path) {
    const Domain& d = state.domain;
    std::string bytes = format_snapshot_header({d.dim(), d.nx(), d.ny(), state.t, state.steps});
    bytes.reserve(bytes.size() + 16 * d.size());
    require_on(state.u, d, "write_snapshot (u)");
    require_on(state.v, d, "write_snapshot (v)");
    append_values(bytes, state.u);
    append_values(bytes, state.v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open snapshot '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing snapshot '" + path + "'");
}

SimState read_snapshot(const std::string& path, const Domain& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    if (bytes.size() < kSnapshotHeaderBytes)
        throw SnapshotError("snapshot truncated: expected at least " + std::to_string(kSnapshotHeaderBytes) +
                            " header bytes, found " + std::to_string(bytes.size()));

    const SnapshotHeader h = parse_snapshot_header(bytes.substr(0, kSnapshotHeaderBytes));
    if (h.dim != expected.dim() || h.nx != expected.nx() || h.ny != expected.ny()) {
        std::ostringstream msg;
        msg << "snapshot grid dim=" << h.dim << " " << h.nx << "x" << h.ny << " does not match the configured domain dim="
            << expected.dim() << " " << expected.nx() << "x" << expected.ny();
        throw SnapshotError(msg.str());
    }
    const std::size_t want = kSnapshotHeaderBytes + 16 * expected.size();
    if (bytes.size() != want) {
        throw SnapshotError("snapshot size mismatch: expected " + std::to_string(want) + " bytes, found " +
                            std::to_string(bytes.size()));
    }

    SimState s;
    s.domain = expected;
    s.t = h.t;
    s.steps = h.steps;
    s.u = Field::zeros(expected);
    s.v = Field::zeros(expected);
    read_values(bytes.data() + kSnapshotHeaderBytes, s.u);
    read_values(bytes.data() + kSnapshotHeaderBytes + 8 * expected.size(), s.v);
    return s;
}

} // namespace kellerscope
