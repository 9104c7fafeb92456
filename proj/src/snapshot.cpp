#include "smch/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "smch/errors.hpp"

namespace smch {

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const SolutionState& state) {
    const auto& g = state.grid();
    std::vector<unsigned char> out;
    out.reserve(kSnapshotHeaderBytes + 8 * g.n);
    out.insert(out.end(), {'S', 'M', 'C', 'H'});
    put_u32(out, kSnapshotVersion);
    put_u32(out, static_cast<std::uint32_t>(g.n));
    put_u32(out, 0);
    put_f64(out, g.half_length);
    put_f64(out, state.t);
    for (double v : state.m.values()) put_f64(out, v);
    return out;
}

SolutionState decode_snapshot(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < kSnapshotHeaderBytes) throw FormatError("snapshot truncated: header incomplete");
    if (std::memcmp(bytes.data(), "SMCH", 4) != 0) throw FormatError("snapshot has bad magic");
    const auto version = get_u32(bytes.data() + 4);
    if (version != kSnapshotVersion) throw FormatError("unsupported snapshot version " + std::to_string(version));
    const std::size_t n = get_u32(bytes.data() + 8);
    const double L = get_f64(bytes.data() + 16);
    const double t = get_f64(bytes.data() + 24);
    if (!std::isfinite(L) || !std::isfinite(t)) throw FormatError("snapshot header holds non-finite L or t");
    if (bytes.size() != kSnapshotHeaderBytes + 8 * n) {
        throw FormatError("snapshot truncated or oversized: expected " + std::to_string(kSnapshotHeaderBytes + 8 * n) +
                          " bytes, found " + std::to_string(bytes.size()));
    }
    GridSpec grid;
    try {
        grid = make_grid(n, L);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("snapshot grid invalid: ") + e.what());
    }
    std::vector<double> m(n);
    for (std::size_t j = 0; j < n; ++j) m[j] = get_f64(bytes.data() + kSnapshotHeaderBytes + 8 * j);
    return SolutionState::from_m(t, Field(grid, std::move(m)));
}

void save_snapshot(const SolutionState& state, const std::string& path) {
    const auto bytes = encode_snapshot(state);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open snapshot for writing: " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw ConfigError("failed writing snapshot: " + path);
}

SolutionState load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open snapshot: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace smch
