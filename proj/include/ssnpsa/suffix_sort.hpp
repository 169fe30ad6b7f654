#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ssnpsa {

// Suffix array of `text` as 1-based starting positions in lexicographic
// order. Prefix-doubling with counting sort, O(n log n); handles texts up to
// 2^32 - 2 bytes.
std::vector<std::uint32_t> suffix_sort(std::string_view text);

}  // namespace ssnpsa
