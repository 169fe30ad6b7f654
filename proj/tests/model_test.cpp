#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ssnpsa/model.hpp"
#include "test_util.hpp"

using namespace ssnpsa;

TEST_CASE("position arithmetic") {
    virtual_text vt = test_util::golden_instance();  // n = 5, m = 2
    CHECK(vt.pos_of(1, 1) == 1);
    CHECK(vt.pos_of(2, 1) == 7);
    CHECK(vt.pos_of(2, 6) == 12);
    CHECK(vt.row_col_of(1) == std::pair<std::uint64_t, std::uint32_t>{1, 1});
    CHECK(vt.row_col_of(7) == std::pair<std::uint64_t, std::uint32_t>{2, 1});
    CHECK(vt.row_col_of(12) == std::pair<std::uint64_t, std::uint32_t>{2, 6});
    for (std::uint64_t p = 1; p <= vt.size(); ++p) {
        auto [row, col] = vt.row_col_of(p);
        CHECK(vt.pos_of(row, col) == p);
    }
    CHECK_THROWS_AS((void)vt.pos_of(0, 1), error);
    CHECK_THROWS_AS((void)vt.pos_of(3, 1), error);
    CHECK_THROWS_AS((void)vt.pos_of(1, 7), error);
    CHECK_THROWS_AS((void)vt.row_col_of(0), error);
    CHECK_THROWS_AS((void)vt.row_col_of(13), error);
}

TEST_CASE("character access and expansion") {
    virtual_text vt = test_util::golden_instance();
    CHECK(vt.char_at(3) == 'a');   // row 1 allele
    CHECK(vt.char_at(9) == 'c');   // row 2 allele
    CHECK(vt.char_at(6) == '#');   // sentinel column
    CHECK(vt.expand() == "gtaca#gtcca#");

    std::string d = vt.expand();
    for (std::uint64_t p = 1; p <= vt.size(); ++p) CHECK(vt.char_at(p) == d[p - 1]);

    ssnp_schema flat = ssnp_schema::create(2, "ab", {}, "ab");
    virtual_text one(flat, genotype_matrix(1, 0));
    CHECK(one.expand() == "ab#");

    virtual_text none(flat, genotype_matrix(0, 0));
    CHECK(none.expand().empty());
}

TEST_CASE("schema structural validation") {
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {{1, 'a', 'c'}}, "?tgca"), error);   // c1 < 2
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {{5, 'a', 'c'}}, "gtca?"), error);   // ck > n-1
    CHECK_THROWS_AS(ssnp_schema::create(6, "acgt", {{2, 'a', 'c'}, {3, 'a', 'c'}}, "g??cat"), error);  // gap 1
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {{3, 'a', 'a'}}, "gt?ca"), error);   // low == high
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {{3, 'c', 'a'}}, "gt?ca"), error);   // low > high
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {{3, 'a', 'z'}}, "gt?ca"), error);   // allele not in alphabet
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {{3, 'a', 'c'}}, "gtxca"), error);   // missing placeholder
    CHECK_THROWS_AS(ssnp_schema::create(5, "acgt", {}, "gt?ca"), error);                // stray placeholder
    CHECK_THROWS_AS(ssnp_schema::create(5, "cagt", {}, "gtaca"), error);                // alphabet unsorted
    CHECK_THROWS_AS(ssnp_schema::create(5, "a#gt", {}, "gtata"), error);                // sentinel in alphabet
    CHECK_THROWS_AS(ssnp_schema::create(5, std::string("a!gt", 4), {}, "gtata"), error);  // below sentinel
    CHECK_THROWS_AS(ssnp_schema::create(5, "?acgt", {}, "gtaca"), error);               // placeholder in alphabet

    try {
        ssnp_schema::create(5, "acgt", {{1, 'a', 'c'}}, "?tgca");
        FAIL("expected throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::site_placement_violation);
    }
}

TEST_CASE("alpha decomposition") {
    virtual_text vt = test_util::golden_instance();
    const ssnp_schema& s = vt.schema();
    REQUIRE(s.alpha_count() == 2);
    CHECK(s.alpha(1) == "gt");
    CHECK(s.alpha(2) == "ca");
    CHECK(s.alpha_column(1) == 1);
    CHECK(s.alpha_column(2) == 4);
    CHECK(s.first_site_at_or_after(1) == 1);
    CHECK(s.first_site_at_or_after(3) == 1);
    CHECK(s.first_site_at_or_after(4) == 0);
    CHECK(s.site_at(3) == 1);
    CHECK(s.site_at(2) == 0);
}

TEST_CASE("validate accepts the golden instance") {
    validation_report report = validate(test_util::golden_instance());
    CHECK(report.ok);
    CHECK(report.violations.empty());
}

TEST_CASE("validate reports duplicated substrings with all positions") {
    // Word "acaaa": alpha_1 = "a" also occurs inside "aaa".
    ssnp_schema schema = ssnp_schema::create(5, "act", {{2, 'c', 't'}}, "a?aaa");
    genotype_matrix matrix = genotype_matrix::from_rows({{false}}, 1);
    validation_report report = validate(virtual_text(schema, matrix));
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].word == 1);
    CHECK(report.violations[0].alpha_index == 1);
    CHECK(report.violations[0].positions == std::vector<std::uint32_t>{1, 3, 4, 5});
}

TEST_CASE("validate with k = 0 checks the whole word once") {
    ssnp_schema schema = ssnp_schema::create(2, "ab", {}, "ab");
    genotype_matrix matrix(2, 0);
    CHECK(validate(virtual_text(schema, matrix)).ok);
}

TEST_CASE("exhaustive language check") {
    CHECK(language_check_exhaustive(test_util::golden_instance().schema()).ok);

    // Low realization "cacaa" duplicates alpha_1 = "ca"; high one is fine.
    ssnp_schema dup = ssnp_schema::create(5, "acg", {{3, 'c', 'g'}}, "ca?aa");
    validation_report report = language_check_exhaustive(dup);
    CHECK_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].word == 0);  // assignment 0 = all-low

    // k = 0 degenerates to a single-word check.
    ssnp_schema flat = ssnp_schema::create(2, "ab", {}, "ab");
    CHECK(language_check_exhaustive(flat).ok);

    // Too many sites for exhaustive enumeration.
    std::vector<snp_site> sites;
    std::string ref(40, 'a');
    for (std::uint32_t j = 0; j < 17; ++j) {
        sites.push_back({2 + 2 * j, 'a', 'b'});
        ref[1 + 2 * j] = '?';
    }
    ssnp_schema big = ssnp_schema::create(40, "ab", sites, ref);
    CHECK_THROWS_AS((void)language_check_exhaustive(big, 16), error);
}

TEST_CASE("custom placeholder character") {
    ssnp_schema schema = parse_schema("SSNP 1\nn=5 k=1 alphabet=acgt\nref=gt_ca\nsite 3 a c\n", '_');
    CHECK(schema.placeholder() == '_');
    CHECK(schema.reference() == "gt_ca");
    genotype_matrix matrix = genotype_matrix::from_rows({{false}}, 1);
    CHECK(virtual_text(schema, matrix).word(1) == "gtaca");
}

TEST_CASE("tiny generator shapes") {
    gen_params params;
    params.n = 5;
    params.k = 0;
    params.m = 1;
    params.alphabet = "ab";
    params.seed = 4;
    auto [schema, matrix] = generate(params);
    CHECK(schema.n() == 5);
    CHECK(schema.reference().size() == 5);
    CHECK(validate(virtual_text(schema, matrix)).ok);
}

TEST_CASE("generator determinism and validity") {
    gen_params params;
    params.n = 200;
    params.k = 5;
    params.m = 8;
    params.alphabet = "acgt";
    params.min_gap = 16;
    params.seed = 1;
    auto [schema1, matrix1] = generate(params);
    auto [schema2, matrix2] = generate(params);
    CHECK(schema1 == schema2);
    CHECK(matrix1 == matrix2);
    CHECK(validate(virtual_text(schema1, matrix1)).ok);

    params.seed = 2;
    auto [schema3, matrix3] = generate(params);
    CHECK_FALSE(schema1 == schema3);
    (void)matrix3;
}

TEST_CASE("generator output passes validation across seeds and shapes") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 40; ++i) {
        gen_params params;
        params.k = rng() % 6;
        params.min_gap = 8 + rng() % 8;
        params.n = params.k * (params.min_gap + 1) + 2 + 20 + rng() % 100;
        params.m = 1 + rng() % 8;
        params.alphabet = (i % 3 == 0) ? "ab" : "acgt";
        params.seed = rng();
        auto [schema, matrix] = generate(params);
        virtual_text vt(schema, matrix);
        CHECK(validate(vt).ok);
        for (std::uint32_t j = 1; j + 1 <= schema.k(); ++j)
            CHECK(schema.site_column(j + 1) - schema.site_column(j) >= params.min_gap);
    }
}

TEST_CASE("generator rejects impossible parameters") {
    gen_params params;
    params.n = 10;
    params.k = 4;
    params.m = 1;
    params.alphabet = "acgt";
    params.min_gap = 2;
    CHECK_THROWS_AS(generate(params), error);  // n < k*(min_gap+1)+2

    params.n = 100;
    params.alphabet = "a";
    CHECK_THROWS_AS(generate(params), error);

    params.alphabet = "acgt";
    params.min_gap = 1;
    CHECK_THROWS_AS(generate(params), error);
}

TEST_CASE("schema file round trip") {
    virtual_text vt = test_util::golden_instance();
    std::string text = serialize_schema(vt.schema());
    CHECK(text == "SSNP 1\nn=5 k=1 alphabet=acgt\nref=gt?ca\nsite 3 a c\n");
    CHECK(parse_schema(text) == vt.schema());

    // Comment lines and blank lines are ignored.
    CHECK(parse_schema("# comment\n\nSSNP 1\nn=5 k=1 alphabet=acgt\nref=gt?ca\n# note\nsite 3 a c\n") == vt.schema());
}

TEST_CASE("schema file rejections") {
    CHECK_THROWS_AS(parse_schema(""), error);
    CHECK_THROWS_AS(parse_schema("SSNP 2\nn=2 k=0 alphabet=ab\nref=ab\n"), error);
    CHECK_THROWS_AS(parse_schema("SSNP 1\nn=x k=0 alphabet=ab\nref=ab\n"), error);
    CHECK_THROWS_AS(parse_schema("SSNP 1\nn=2 k=0\nref=ab\n"), error);
    CHECK_THROWS_AS(parse_schema("SSNP 1\nn=3 k=0 alphabet=ab\nref=ab\n"), error);      // ref too short
    CHECK_THROWS_AS(parse_schema("SSNP 1\nn=2 k=1 alphabet=ab\nref=ab\n"), error);      // missing site line
    CHECK_THROWS_AS(parse_schema("SSNP 1\nn=2 k=0 alphabet=ab\nref=ab\nsite 2 a b\n"), error);  // extra site line
    CHECK_THROWS_AS(parse_schema("SSNP 1\nn=5 k=1 alphabet=ab\nref=ab?ab\nsite 3 ab b\n"), error);
}

TEST_CASE("matrix file round trip") {
    virtual_text vt = test_util::golden_instance();
    std::string text = serialize_matrix(vt.matrix());
    CHECK(text == "0\n1\n");
    CHECK(parse_matrix(text, vt.schema()) == vt.matrix());

    ssnp_schema flat = ssnp_schema::create(2, "ab", {}, "ab");
    CHECK(parse_matrix("\n\n\n", flat).m() == 0);                 // k=0 rows invisible without --rows
    CHECK(parse_matrix("\n\n\n", flat, 3).m() == 3);
    CHECK(serialize_matrix(genotype_matrix(2, 0)) == "\n\n");

    CHECK_THROWS_AS(parse_matrix("01\n", vt.schema()), error);    // wrong width
    CHECK_THROWS_AS(parse_matrix("2\n", vt.schema()), error);     // bad digit
    CHECK_THROWS_AS(parse_matrix("0\n1\n", vt.schema(), 3), error);  // row count mismatch
}

TEST_CASE("alignment reading") {
    CHECK(read_alignment("gtaca\ngtcca\n") == std::vector<std::string>{"gtaca", "gtcca"});
    CHECK(read_alignment(">r1\ngta\nca\n>r2 description\ngtcca\n") == std::vector<std::string>{"gtaca", "gtcca"});
    CHECK(read_alignment("").empty());
    // First non-blank line decides the format: this is plain mode, three lines.
    CHECK(read_alignment("gtaca\n>r2\ngtcca\n").size() == 3);
}

TEST_CASE("alignment inference") {
    std::vector<std::string> words{"gtaca", "gtcca"};
    auto [schema, matrix] = infer_from_alignment(words);
    CHECK(schema == test_util::golden_instance().schema());
    CHECK(matrix == test_util::golden_instance().matrix());

    std::vector<std::string> same{"aa", "aa"};
    auto [flat, flat_matrix] = infer_from_alignment(same);
    CHECK(flat.k() == 0);
    CHECK(flat_matrix.m() == 2);

    std::vector<std::string> misplaced{"ab", "cd"};
    CHECK_THROWS_AS(infer_from_alignment(misplaced), error);

    std::vector<std::string> triallelic{"aaa", "aca", "aga"};
    try {
        infer_from_alignment(triallelic);
        FAIL("expected throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::too_many_alleles_in_column);
    }

    std::vector<std::string> ragged{"ab", "abc"};
    CHECK_THROWS_AS(infer_from_alignment(ragged), error);

    std::vector<std::string> dup{"cacaa", "cagaa"};  // "ca" occurs twice in word 1
    try {
        infer_from_alignment(dup);
        FAIL("expected throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::uniqueness_violation);
    }
}

TEST_CASE("inference round-trips generated instances") {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 25; ++i) {
        virtual_text vt = test_util::random_instance(
            60 + rng() % 120, rng() % 4, 1 + rng() % 6, i % 2 ? "acgt" : "abcde", 12, rng());
        std::vector<std::string> words;
        for (std::uint64_t r = 1; r <= vt.m(); ++r) words.push_back(vt.word(r));
        auto [schema, matrix] = infer_from_alignment(words);
        virtual_text back(schema, matrix);
        REQUIRE(back.m() == vt.m());
        for (std::uint64_t r = 1; r <= vt.m(); ++r) CHECK(back.word(r) == words[r - 1]);
    }
}
