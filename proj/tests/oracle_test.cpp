#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "ssnpsa/crc32c.hpp"
#include "ssnpsa/oracle.hpp"
#include "test_util.hpp"

using namespace ssnpsa;

TEST_CASE("naive suffix array on fixed texts") {
    CHECK(naive_sa("a#") == std::vector<std::uint64_t>{2, 1});
    CHECK(naive_sa("ab#") == std::vector<std::uint64_t>{3, 1, 2});
    CHECK(naive_sa("gtaca#gtcca#") == test_util::golden_sa());
}

TEST_CASE("naive suffix array orders strictly") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        virtual_text vt = test_util::random_instance(40 + rng() % 40, rng() % 3, 1 + rng() % 5, "acgt", 8, rng());
        std::string text = vt.expand();
        std::vector<std::uint64_t> sa = naive_sa(text);
        REQUIRE(sa.size() == text.size());
        std::vector<bool> seen(text.size() + 1, false);
        for (std::uint64_t p : sa) {
            REQUIRE(p >= 1);
            REQUIRE(p <= text.size());
            CHECK_FALSE(seen[p]);
            seen[p] = true;
        }
        for (std::size_t r = 1; r < sa.size(); ++r) {
            std::string_view a = std::string_view(text).substr(sa[r - 1] - 1);
            std::string_view b = std::string_view(text).substr(sa[r] - 1);
            CHECK(a < b);
        }
    }
}

TEST_CASE("oracle size guard") {
    std::string big(oracle_text_limit + 1, 'a');
    try {
        (void)naive_sa(big);
        FAIL("expected throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::oracle_limit);
    }
}

TEST_CASE("naive pattern scans") {
    CHECK(naive_count("gtaca#gtcca#", "ca") == 2);
    CHECK(naive_locate("gtaca#gtcca#", "ca") == std::vector<std::uint64_t>{4, 10});
    CHECK(naive_count("ab#", "b") == 1);
    CHECK(naive_count("ab#", "zz") == 0);
    CHECK(naive_count("aaaa", "aa") == 3);  // overlapping occurrences
    CHECK_THROWS_AS((void)naive_count("ab#", ""), error);
}

TEST_CASE("full_compare accepts the golden instance") {
    compare_report report = full_compare(test_util::golden_instance());
    CHECK(report.ok);
    CHECK(report.ranks_checked == 12);
    CHECK(report.patterns_checked == 20);
    CHECK(report.divergence.empty());
}

TEST_CASE("full_compare accepts a flat random instance") {
    virtual_text vt = test_util::random_instance(30, 0, 3, "acgt", 2, 77);
    compare_report report = full_compare(vt);
    CHECK(report.ok);
    CHECK(report.ranks_checked == vt.size());
}

TEST_CASE("full_compare flags a corrupted permutation chain") {
    // Damage a chain bitvector behind the serialization layer (checksum
    // recomputed so the file loads), then make sure the sweep notices the
    // index no longer matches the oracle. With stride 4 and k = 3 there are
    // no anchor sites, so accesses keyed at sites 2 and 3 walk B_2.
    virtual_text vt = test_util::random_instance(64, 3, 6, "acgt", 10, 3);
    build_config config;
    config.stride = 4;
    compressed_sa csa = compressed_sa::build(vt, config);

    std::ostringstream out;
    csa.save(out);
    std::string blob = out.str();

    // Walk the format to the chain section, then flip a payload bit of B_2.
    auto u64_at = [&](std::size_t at) {
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(blob[at + i]);
        return v;
    };
    std::size_t at = 8 + 4;              // magic, version
    at += 4 * 8;                          // n, k, m, g
    std::uint64_t schema_len = u64_at(at);
    at += 8 + schema_len;
    at += (vt.m() * vt.k() + 7) / 8;      // matrix bits
    std::uint64_t starts_bits = u64_at(at);
    at += 8 + 8 * ((starts_bits + 63) / 64);
    std::uint64_t block_count = u64_at(at);
    at += 8 + block_count * (4 + 4 + 1 + 4);
    std::uint64_t chain_bits = u64_at(at);
    REQUIRE(chain_bits == vt.m());
    std::size_t per_chain = 8 + 8 * ((vt.m() + 63) / 64);
    blob[at + per_chain + 8] ^= 1;        // first limb of B_2

    std::uint32_t crc = crc32c(blob.data(), blob.size() - 4);
    for (int i = 0; i < 4; ++i) blob[blob.size() - 4 + i] = static_cast<char>((crc >> (8 * i)) & 0xFF);

    std::istringstream in(blob);
    compressed_sa damaged = compressed_sa::load(in);
    compare_report report = full_compare(damaged);
    CHECK_FALSE(report.ok);
    CHECK_FALSE(report.divergence.empty());
}
