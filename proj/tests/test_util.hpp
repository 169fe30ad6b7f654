#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssnpsa/index.hpp"
#include "ssnpsa/model.hpp"

namespace test_util {

// Two-word instance used across the suites: words "gtaca" and "gtcca",
// database text "gtaca#gtcca#".
inline ssnpsa::virtual_text golden_instance() {
    ssnpsa::ssnp_schema schema =
        ssnpsa::ssnp_schema::create(5, "acgt", {{3, 'a', 'c'}}, "gt?ca");
    ssnpsa::genotype_matrix matrix = ssnpsa::genotype_matrix::from_rows({{false}, {true}}, 1);
    return {std::move(schema), std::move(matrix)};
}

inline const std::vector<std::uint64_t>& golden_sa() {
    static const std::vector<std::uint64_t> sa = {12, 6, 11, 5, 3, 10, 4, 9, 1, 7, 2, 8};
    return sa;
}

inline ssnpsa::virtual_text random_instance(std::uint32_t n, std::uint32_t k, std::uint64_t m,
                                            const std::string& alphabet, std::uint32_t min_gap, std::uint64_t seed) {
    ssnpsa::gen_params params;
    params.n = n;
    params.k = k;
    params.m = m;
    params.alphabet = alphabet;
    params.min_gap = min_gap;
    params.seed = seed;
    auto [schema, matrix] = ssnpsa::generate(params);
    return {std::move(schema), std::move(matrix)};
}

// Instance whose words break substring uniqueness while staying structurally
// valid: word (0,0) = "abaacabab" contains "abab" both at its canonical
// place (columns 6..9) and rooted at column 1 via the site alleles, so the
// column-1 low-side block is split in the suffix array.
inline ssnpsa::virtual_text contiguity_breaker() {
    ssnpsa::ssnp_schema schema =
        ssnpsa::ssnp_schema::create(9, "abc", {{2, 'b', 'c'}, {4, 'a', 'c'}}, "a?a?cabab");
    ssnpsa::genotype_matrix matrix =
        ssnpsa::genotype_matrix::from_rows({{false, false}, {false, true}}, 2);
    return {std::move(schema), std::move(matrix)};
}

}  // namespace test_util
