#pragma once

#include <cstddef>
#include <cstdint>

namespace ssnpsa {

// CRC-32C (Castagnoli), table-driven, as used for the index file trailer.
std::uint32_t crc32c(const void* data, std::size_t size, std::uint32_t seed = 0);

}  // namespace ssnpsa
