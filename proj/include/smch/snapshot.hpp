#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smch/dynamics.hpp"

namespace smch {

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

/// Layout (little-endian): "SMCH", version u32, n u32, 4 zero bytes, L f64, t f64,
/// then n f64 samples of m.
std::vector<unsigned char> encode_snapshot(const SolutionState& state);
/// Throws FormatError on bad magic, version, size or non-finite header values.
SolutionState decode_snapshot(const std::vector<unsigned char>& bytes);

void save_snapshot(const SolutionState& state, const std::string& path);
SolutionState load_snapshot(const std::string& path);

}  // namespace smch
