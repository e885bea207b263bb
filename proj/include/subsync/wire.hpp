#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "subsync/docex.hpp"

namespace subsync::wire {

// Big-endian layout:
//   header   "DXSE" | version 0x01 | scheme | n (u32) | t (u8) | k (u8)
//   bigint   length L (u16) | L magnitude bytes
//   scheme 0x00 worst, 0x02 average non-dense: modulus, residue
//   scheme 0x01 average dense: pattern (bit-string binary form), window (u32),
//                              hint modulus, hint residue, modulus, residue
inline constexpr std::uint8_t kMagic[4] = {0x44, 0x58, 0x53, 0x45};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 12;

enum class Scheme : std::uint8_t { Worst = 0x00, AverageDense = 0x01, AverageNonDense = 0x02 };

using Message = std::variant<WorstCaseEncoding, AverageCaseEncoding>;

std::vector<std::uint8_t> serialize(const WorstCaseEncoding& enc);
std::vector<std::uint8_t> serialize(const AverageCaseEncoding& enc);

// Throws Error{FormatError} on bad magic, version, scheme, truncation, trailing
// bytes, or a residue not below its modulus.
Message deserialize(std::span<const std::uint8_t> bytes);

}  // namespace subsync::wire
