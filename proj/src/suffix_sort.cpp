#include "ssnpsa/suffix_sort.hpp"

#include <algorithm>
#include <numeric>

#include "ssnpsa/errors.hpp"

namespace ssnpsa {

std::vector<std::uint32_t> suffix_sort(std::string_view text) {
    const std::uint64_t n = text.size();
    if (n >= 0xFFFFFFFFULL) raise(errc::invalid_argument, "text too large for 32-bit suffix sort");
    if (n == 0) return {};

    std::vector<std::uint32_t> sa(n), rank(n), next_rank(n), order(n);
    std::vector<std::uint32_t> count(std::max<std::uint64_t>(n + 1, 257), 0);

    // Round 0: sort by first character.
    for (std::uint64_t i = 0; i < n; ++i) count[static_cast<unsigned char>(text[i]) + 1]++;
    for (std::uint64_t c = 1; c < 257; ++c) count[c] += count[c - 1];
    for (std::uint64_t i = 0; i < n; ++i) sa[count[static_cast<unsigned char>(text[i])]++] = static_cast<std::uint32_t>(i);
    rank[sa[0]] = 0;
    for (std::uint64_t i = 1; i < n; ++i)
        rank[sa[i]] = rank[sa[i - 1]] + (text[sa[i]] != text[sa[i - 1]] ? 1 : 0);

    for (std::uint64_t h = 1; rank[sa[n - 1]] + 1 < n; h *= 2) {
        // Arrange suffixes by the rank of their h-shifted tail: suffixes with
        // no tail (i >= n - h) come first, then the rest in current sa order.
        std::uint64_t p = 0;
        for (std::uint64_t i = n - h; i < n; ++i) order[p++] = static_cast<std::uint32_t>(i);
        for (std::uint64_t i = 0; i < n; ++i)
            if (sa[i] >= h) order[p++] = sa[i] - static_cast<std::uint32_t>(h);

        // Stable counting sort of `order` by head rank.
        std::uint64_t buckets = rank[sa[n - 1]] + 1;
        std::fill(count.begin(), count.begin() + static_cast<std::ptrdiff_t>(buckets + 1), 0);
        for (std::uint64_t i = 0; i < n; ++i) count[rank[i] + 1]++;
        for (std::uint64_t c = 1; c <= buckets; ++c) count[c] += count[c - 1];
        for (std::uint64_t i = 0; i < n; ++i) sa[count[rank[order[i]]]++] = order[i];

        auto tail_rank = [&](std::uint32_t i) -> std::uint64_t {
            return i + h < n ? rank[i + h] + 1 : 0;
        };
        next_rank[sa[0]] = 0;
        for (std::uint64_t i = 1; i < n; ++i) {
            bool same = rank[sa[i]] == rank[sa[i - 1]] && tail_rank(sa[i]) == tail_rank(sa[i - 1]);
            next_rank[sa[i]] = next_rank[sa[i - 1]] + (same ? 0 : 1);
        }
        rank.swap(next_rank);
    }

    for (std::uint32_t& v : sa) ++v;  // 1-based positions
    return sa;
}

}  // namespace ssnpsa
