#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ssnpsa/index.hpp"
#include "ssnpsa/model.hpp"

namespace ssnpsa {

// Brute-force references the index is checked against. The suffix array here
// is a plain comparison sort, deliberately sharing no code with the
// prefix-doubling construction used by the builder.

inline constexpr std::uint64_t oracle_text_limit = 1ULL << 20;

// 1-based suffix array by direct comparison sort. Texts above
// oracle_text_limit are refused rather than silently taking O(n^2 log n).
std::vector<std::uint64_t> naive_sa(std::string_view text);

std::uint64_t naive_count(std::string_view text, std::string_view pattern);
std::vector<std::uint64_t> naive_locate(std::string_view text, std::string_view pattern);

struct compare_options {
    std::uint64_t pattern_samples = 20;
    std::uint64_t seed = 0x5eed;
};

struct compare_report {
    bool ok = false;
    std::uint64_t ranks_checked = 0;
    std::uint64_t patterns_checked = 0;
    std::string divergence;  // empty when ok

    double build_seconds = 0, oracle_seconds = 0, sweep_seconds = 0;
    std::uint64_t max_sigma_steps = 0;
    double mean_sigma_steps = 0;

    std::string to_string() const;
};

// Sweeps every suffix-array rank of the index against naive_sa of the
// expanded text, then checks count/locate against naive scans on sampled
// patterns. Reports the first divergence instead of throwing; query errors
// raised by a damaged index count as divergences.
compare_report full_compare(const compressed_sa& csa, const compare_options& options = {});

// Builds the index for vt first, then compares.
compare_report full_compare(const virtual_text& vt, const build_config& config = {}, const compare_options& options = {});

}  // namespace ssnpsa
